//! Seeded Monte-Carlo audits.
//!
//! Each audit draws random instances, evaluates one relation between work
//! quantities and records a signed margin per trial. Margins are oriented so
//! that a violation shows up as a positive number: a trial fails when its
//! margin exceeds the configured tolerance. Trial `t` of claim `c` draws from
//! its own stream of the seed, so serial and parallel runs agree exactly.
//!
//! Sampling over random instances is evidence for a relation, never a proof;
//! every result says so in its `evidence` field.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::ergotropy::{ergotropy, format_float, incoherent_ergotropy, observational_ergotropy};
use crate::error::{Error, Result};
use crate::majorization::{
    bistochastic_from_unitary, lemma1_matrix, majorization_deficit, schur_margin, ProbVector,
};
use crate::measurement::{
    coarse_grained_state, energy_incoherent, outcome_distribution, post_process,
    FineGrainedMeasurement, StochasticMatrix,
};
use crate::quantum::{
    haar_unitary, random_column_stochastic, random_density, random_hamiltonian,
    random_nondegenerate_hamiltonian, random_probability, DensityMatrix, Hamiltonian, RandomSource,
};

/// Tolerance for the exact algebraic identities checked by the Lemma 1 audit.
pub const ALGEBRA_TOL: f64 = 1e-10;

/// Hamiltonians with a level spacing below this are resampled in the Theorem 2 audit.
pub const MIN_LEVEL_GAP: f64 = 1e-8;

/// The audited relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// Post-processing a fine-grained measurement never raises observational ergotropy.
    Theorem1,
    /// Over energy-incoherent measurements the best observational ergotropy is the incoherent ergotropy.
    Theorem2,
    /// Over all coarse-grained measurements the best observational ergotropy is the ergotropy.
    Theorem3,
    /// Coarse-grained spectra are majorized by their fine-grained parents.
    Lemma1,
    /// Passive energy is Schur-concave in the spectrum.
    Schur,
}

impl Claim {
    pub const ALL: [Claim; 5] = [
        Claim::Theorem1,
        Claim::Theorem2,
        Claim::Theorem3,
        Claim::Lemma1,
        Claim::Schur,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Theorem1 => "theorem1",
            Claim::Theorem2 => "theorem2",
            Claim::Theorem3 => "theorem3",
            Claim::Lemma1 => "lemma1",
            Claim::Schur => "schur",
        }
    }

    fn stream_tag(self) -> u64 {
        Claim::ALL.iter().position(|&c| c == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown claim `{s}`"))
    }
}

/// Parameters shared by all audits.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig {
    /// Hilbert-space dimension.
    pub d: usize,
    /// Number of coarse outcomes for post-processed measurements.
    pub n: usize,
    /// Rank of the sampled states.
    pub rank: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Fan trials out over the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl AuditConfig {
    pub fn new(d: usize, n: usize, trials: usize, seed: u64) -> Self {
        Self {
            d,
            n,
            rank: d,
            trials,
            seed,
            tol: 1e-9,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidConfig(m));
        if self.d == 0 {
            return fail("d must be at least 1".into());
        }
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.rank == 0 || self.rank > self.d {
            return fail(format!("rank {} outside 1..={}", self.rank, self.d));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return fail(format!("tolerance {} must be positive", self.tol));
        }
        Ok(())
    }
}

/// Aggregate outcome of one audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditResult {
    pub claim: String,
    pub d: usize,
    pub n: usize,
    pub rank: usize,
    pub seed: u64,
    pub tol: f64,
    pub trials: usize,
    pub violations: usize,
    /// Largest per-trial margin; positive values beyond `tol` are violations.
    pub worst_margin: f64,
    pub evidence: &'static str,
    /// Excluded from serialized output so identical runs print identical bytes.
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl AuditResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("audit result serializes")
    }

    pub const CSV_HEADER: &'static str = "claim,d,n,rank,seed,tol,trials,violations,worst_margin";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.claim,
            self.d,
            self.n,
            self.rank,
            self.seed,
            format_float(self.tol),
            self.trials,
            self.violations,
            format_float(self.worst_margin)
        )
    }
}

/// Margin of a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialCheck {
    pub margin: f64,
    pub violated: bool,
}

// NaN margins count as violations.
fn exceeds(margin: f64, tol: f64) -> bool {
    margin.is_nan() || margin > tol
}

impl TrialCheck {
    fn against(margin: f64, tol: f64) -> Self {
        Self {
            margin,
            violated: exceeds(margin, tol),
        }
    }
}

/// `R(rho, Q) - R(rho, P)` for `Q = D P`; violated when above `tol`.
pub fn theorem1_check(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    p: &FineGrainedMeasurement,
    d: &StochasticMatrix,
    tol: f64,
) -> Result<TrialCheck> {
    let fine = p.povm();
    let coarse = post_process(&fine, d)?;
    let r_fine = observational_ergotropy(rho, h, &fine)?;
    let r_coarse = observational_ergotropy(rho, h, &coarse)?;
    Ok(TrialCheck::against(r_coarse - r_fine, tol))
}

/// Equality `R(rho, E) = R_inc(rho)` for the energy measurement `E`, and the
/// bound `R(rho, N) <= R_inc(rho)` for the energy-incoherent `N` built from `q`.
pub fn theorem2_check(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    q: &StochasticMatrix,
    tol: f64,
) -> Result<TrialCheck> {
    let r_inc = incoherent_ergotropy(rho, h)?;
    let e = FineGrainedMeasurement::energy(h).povm();
    let equality = (observational_ergotropy(rho, h, &e)? - r_inc).abs();
    let n = energy_incoherent(h, q)?;
    let bound = observational_ergotropy(rho, h, &n)? - r_inc;
    Ok(TrialCheck::against(equality.max(bound), tol))
}

/// Equality `R(rho, eigenbasis(rho)) = R(rho)` and the bound `R(rho, M) <= R(rho)`.
pub fn theorem3_check(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    m: &FineGrainedMeasurement,
    tol: f64,
) -> Result<TrialCheck> {
    let r = ergotropy(rho, h)?;
    let eig = FineGrainedMeasurement::eigenbasis(rho).povm();
    let equality = (observational_ergotropy(rho, h, &eig)? - r).abs();
    let bound = observational_ergotropy(rho, h, &m.povm())? - r;
    Ok(TrialCheck::against(equality.max(bound), tol))
}

/// Largest observational ergotropy over `samples` Haar-random fine-grained
/// measurements; a lower estimate of the supremum, which equals `R(rho)`.
pub fn theorem3_supremum_estimate(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    samples: usize,
    rng: &mut RandomSource,
) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let m = FineGrainedMeasurement::haar(rho.dim(), rng)?;
        best = best.max(observational_ergotropy(rho, h, &m.povm())?);
    }
    Ok(best)
}

/// Spectrum majorization `lambda(rho_cg^P) ≻ lambda(rho_cg^Q)` (within `tol`),
/// bistochasticity of the composed matrix `B` and `mu = B p` (within
/// [`ALGEBRA_TOL`]).
///
/// The coarse spectrum is obtained by diagonalizing `rho_cg^Q`, independently
/// of `B`.
pub fn lemma1_check(
    rho: &DensityMatrix,
    p: &FineGrainedMeasurement,
    d: &StochasticMatrix,
    tol: f64,
) -> Result<TrialCheck> {
    let fine = p.povm();
    let coarse = post_process(&fine, d)?;
    let p_fine = outcome_distribution(rho, &fine)?;
    let cg_fine = coarse_grained_state(rho, &fine)?;
    let cg_coarse = coarse_grained_state(rho, &coarse)?;

    let n = cg_fine.dim();
    let spec_fine = ProbVector::new(cg_fine.spectrum().to_vec())?.zero_padded(n);
    let spec_coarse = ProbVector::new(cg_coarse.spectrum().to_vec())?.zero_padded(n);
    let deficit = majorization_deficit(spec_fine.as_slice(), spec_coarse.as_slice())?;

    let b = lemma1_matrix(p, d)?;
    let stochastic_defect = b
        .row_sums()
        .into_iter()
        .chain(b.column_sums())
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    let mut mu = b.apply(&p_fine)?;
    mu.sort_by(f64::total_cmp);
    let mu_defect = mu
        .iter()
        .zip(cg_coarse.spectrum())
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max);

    let algebra = stochastic_defect.max(mu_defect);
    Ok(TrialCheck {
        margin: deficit.max(algebra),
        violated: exceeds(deficit, tol) || exceeds(algebra, ALGEBRA_TOL),
    })
}

/// `E^T x_down - E^T y_down` for `x ≻ y`; violated when above `tol`.
pub fn schur_check(h: &Hamiltonian, x: &ProbVector, y: &ProbVector, tol: f64) -> Result<TrialCheck> {
    Ok(TrialCheck::against(schur_margin(h, x, y)?, tol))
}

/// The random stream for one trial of one claim.
pub fn trial_source(seed: u64, claim: Claim, trial: usize) -> RandomSource {
    RandomSource::new(seed).split((claim.stream_tag() << 40) | trial as u64)
}

fn sample_trial(claim: Claim, cfg: &AuditConfig, rng: &mut RandomSource) -> Result<TrialCheck> {
    let AuditConfig { d, n, rank, tol, .. } = *cfg;
    match claim {
        Claim::Theorem1 => {
            let h = random_hamiltonian(d, rng)?;
            let rho = random_density(d, rank, rng)?;
            let p = FineGrainedMeasurement::haar(d, rng)?;
            let dm = random_column_stochastic(n, d, rng)?;
            theorem1_check(&rho, &h, &p, &dm, tol)
        }
        Claim::Theorem2 => {
            let h = random_nondegenerate_hamiltonian(d, MIN_LEVEL_GAP, rng)?;
            let rho = random_density(d, rank, rng)?;
            let q = random_column_stochastic(n, d, rng)?;
            theorem2_check(&rho, &h, &q, tol)
        }
        Claim::Theorem3 => {
            let h = random_hamiltonian(d, rng)?;
            let rho = random_density(d, rank, rng)?;
            let m = FineGrainedMeasurement::haar(d, rng)?;
            theorem3_check(&rho, &h, &m, tol)
        }
        Claim::Lemma1 => {
            let rho = random_density(d, rank, rng)?;
            let p = FineGrainedMeasurement::haar(d, rng)?;
            let dm = random_column_stochastic(n, d, rng)?;
            lemma1_check(&rho, &p, &dm, tol)
        }
        Claim::Schur => {
            let h = random_hamiltonian(d, rng)?;
            let x = ProbVector::new(random_probability(d, rng))?;
            let b = bistochastic_from_unitary(&haar_unitary(d, rng)?)?;
            let y = ProbVector::new(b.apply(x.as_slice())?)?;
            schur_check(&h, &x, &y, tol)
        }
    }
}

/// Runs `cfg.trials` sampled trials of `claim`.
pub fn audit(claim: Claim, cfg: &AuditConfig) -> Result<AuditResult> {
    cfg.validate()?;
    let start = Instant::now();
    let run = |t: usize| sample_trial(claim, cfg, &mut trial_source(cfg.seed, claim, t));
    let checks: Vec<TrialCheck> = if cfg.parallel {
        (0..cfg.trials).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..cfg.trials).map(run).collect::<Result<_>>()?
    };
    let violations = checks.iter().filter(|c| c.violated).count();
    let worst_margin = checks
        .iter()
        .map(|c| c.margin)
        .filter(|m| m.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(AuditResult {
        claim: claim.id().to_string(),
        d: cfg.d,
        n: cfg.n,
        rank: cfg.rank,
        seed: cfg.seed,
        tol: cfg.tol,
        trials: cfg.trials,
        violations,
        worst_margin,
        evidence: "sampled",
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn audit_theorem1(cfg: &AuditConfig) -> Result<AuditResult> {
    audit(Claim::Theorem1, cfg)
}

pub fn audit_theorem2(cfg: &AuditConfig) -> Result<AuditResult> {
    audit(Claim::Theorem2, cfg)
}

pub fn audit_theorem3(cfg: &AuditConfig) -> Result<AuditResult> {
    audit(Claim::Theorem3, cfg)
}

pub fn audit_lemma1(cfg: &AuditConfig) -> Result<AuditResult> {
    audit(Claim::Lemma1, cfg)
}

pub fn audit_schur(cfg: &AuditConfig) -> Result<AuditResult> {
    audit(Claim::Schur, cfg)
}

/// All five audits; each draws from its own streams of `cfg.seed`.
pub fn audit_all(cfg: &AuditConfig) -> Result<Vec<AuditResult>> {
    Claim::ALL.iter().map(|&c| audit(c, cfg)).collect()
}
