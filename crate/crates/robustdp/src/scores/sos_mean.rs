//! Sum-of-squares certifiable-mean score.
//!
//! Variables are the inlier indicators `w_i`, the repaired points `x'_i` and a
//! `d×d` slack matrix `M`. At level `T` a degree-6 approximate
//! pseudoexpectation must satisfy
//!
//! ```text
//! w_i² = w_i,  w_i(x'_ij − y_ij) = 0          (psd pairs, slack τT)
//! (Σw_i − n + T)/(2n) ≥ 0                     (T-constraint, slack 2.5τT)
//! Cov(x') + MMᵀ = (1+α)I                      (psd pairs per entry j ≤ k)
//! |L[μ'_j] − μ̃_j| ≤ φ                         (regular, omitted for the low scorer)
//! ```
//!
//! and the score of μ̃ is the least such `T`.

use crate::dataset::Dataset;
use crate::engine::{compute_score_t, ellipsoid_search, ConstraintSystem, EllipsoidOptions, FunctionalRep, Labeled, MonomialBasis, Poly, ScoreSearch, TConstraint};
use crate::error::{Error, Result};
use crate::mechanism::{Domain, LowScorer, ScoreOracle};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub const MEAN_DEGREE: usize = 6;
/// Floor on the default relaxation scale.
pub const TAU_FLOOR: f64 = 1.0 / (1u64 << 60) as f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanScoreConfig {
    pub alpha: f64,
    /// `None` selects `min((nd)^-12, 0.01)`, floored at 2⁻⁶⁰.
    pub tau: Option<f64>,
    pub phi: f64,
    /// Radius of the candidate-mean domain.
    pub radius: f64,
    pub gamma: f64,
    /// `None` selects the moment norm of any assignment with entries bounded by the data scale.
    pub norm_bound: Option<f64>,
    pub poly_factor: Option<f64>,
    #[serde(default)]
    pub ellipsoid: EllipsoidOptions,
}

impl Default for MeanScoreConfig {
    fn default() -> Self {
        MeanScoreConfig { alpha: 0.5, tau: None, phi: 0.25, radius: 10.0, gamma: 0.05, norm_bound: None, poly_factor: None, ellipsoid: EllipsoidOptions::default() }
    }
}

impl MeanScoreConfig {
    pub fn tau_for(&self, n: usize, d: usize) -> f64 {
        self.tau.unwrap_or_else(|| ((n * d) as f64).powi(-12).min(0.01).max(TAU_FLOOR))
    }

    fn validate(&self, d: usize) -> Result<()> {
        if !(self.alpha > 0.0) || !(self.gamma > 0.0) || !(self.radius > 0.0) {
            return Err(Error::InvalidParameter("alpha, gamma and radius must be positive".into()));
        }
        if !(self.phi > 0.0 && self.phi <= self.alpha / (d as f64).sqrt()) {
            return Err(Error::InvalidParameter(format!("phi={} must lie in (0, alpha/sqrt(d)]", self.phi)));
        }
        Ok(())
    }
}

/// Variable layout: `w_i`, then `x'_ij` row-major, then `M_jk` row-major.
#[derive(Clone, Copy, Debug)]
pub struct MeanVars {
    pub n: usize,
    pub d: usize,
}

impl MeanVars {
    pub fn w(&self, i: usize) -> usize {
        i
    }
    pub fn x(&self, i: usize, j: usize) -> usize {
        self.n + i * self.d + j
    }
    pub fn m(&self, j: usize, k: usize) -> usize {
        self.n + self.n * self.d + j * self.d + k
    }
    pub fn count(&self) -> usize {
        self.n + self.n * self.d + self.d * self.d
    }

    pub fn mu(&self, j: usize) -> Poly {
        let mut p = Poly::zero();
        for i in 0..self.n {
            p = p + Poly::var(self.x(i, j));
        }
        p.scale(1.0 / self.n as f64)
    }
}

fn default_norm_bound(vars: &MeanVars, y: &Dataset, cfg: &MeanScoreConfig) -> f64 {
    let max_y = y.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let b = 1.0f64.max(cfg.radius).max(max_y).max((1.0 + cfg.alpha).sqrt());
    let base = vars.count() as f64 * b * b;
    (0..=MEAN_DEGREE as i32).map(|k| base.powi(k)).sum::<f64>().sqrt()
}

/// The certifiable-mean system for `y`, with the closeness constraint when `mu_tilde` is given.
pub fn mean_system(y: &Dataset, mu_tilde: Option<&[f64]>, cfg: &MeanScoreConfig) -> Result<ConstraintSystem> {
    let (n, d) = (y.n(), y.dim);
    cfg.validate(d)?;
    let vars = MeanVars { n, d };
    let norm = cfg.norm_bound.unwrap_or_else(|| default_norm_bound(&vars, y, cfg));
    let mut sys = ConstraintSystem::new(vars.count(), MEAN_DEGREE, n as f64, norm, cfg.tau_for(n, d));
    sys.poly_factor = cfg.poly_factor;
    let mut pair = |label: String, p: Poly| {
        sys.psd.push(Labeled::new(format!("{label}>=0"), p.clone()));
        sys.psd.push(Labeled::new(format!("{label}<=0"), -&p));
    };
    for i in 0..n {
        let w = Poly::var(vars.w(i));
        pair(format!("w{i}^2-w{i}"), &(&w * &w) - &w);
        for j in 0..d {
            pair(format!("w{i}(x{i}{j}-y{i}{j})"), &w * &(Poly::var(vars.x(i, j)) - Poly::constant(y.row(i)[j])));
        }
    }
    let mus: Vec<Poly> = (0..d).map(|j| vars.mu(j)).collect();
    for j in 0..d {
        for k in j..d {
            let mut e = Poly::zero();
            for i in 0..n {
                let a = Poly::var(vars.x(i, j)) - &mus[j];
                let b = Poly::var(vars.x(i, k)) - &mus[k];
                e = e + (a * b).scale(1.0 / n as f64);
            }
            for l in 0..d {
                e = e + Poly::var(vars.m(j, l)) * Poly::var(vars.m(k, l));
            }
            if j == k {
                e = e - Poly::constant(1.0 + cfg.alpha);
            }
            pair(format!("cov{j}{k}"), e);
        }
    }
    let mut sum_w = Poly::constant(-(n as f64));
    for i in 0..n {
        sum_w = sum_w + Poly::var(vars.w(i));
    }
    sys.t_constraint = Some(TConstraint { base: sum_w.scale(0.5 / n as f64), slope: 0.5 / n as f64, slack_scale: 2.5 });
    if let Some(mu) = mu_tilde {
        if mu.len() != d {
            return Err(Error::InvalidParameter(format!("candidate mean has dimension {}, data {d}", mu.len())));
        }
        for j in 0..d {
            sys.regular.push(Labeled::new(format!("mu{j}>=target-phi"), &mus[j] - &Poly::constant(mu[j] - cfg.phi)));
            sys.regular.push(Labeled::new(format!("mu{j}<=target+phi"), &Poly::constant(mu[j] + cfg.phi) - &mus[j]));
        }
    }
    Ok(sys)
}

/// Assignment vector for `w`, `x'` and `M = √((1+α)I − Cov(x'))`, if that root exists.
pub fn mean_assignment(w: &[f64], x: &Dataset, alpha: f64) -> Option<Vec<f64>> {
    let (n, d) = (x.n(), x.dim);
    let vars = MeanVars { n, d };
    let mean = x.mean();
    let cov = DMatrix::from_fn(d, d, |j, k| x.rows().map(|r| (r[j] - mean[j]) * (r[k] - mean[k])).sum::<f64>() / n as f64);
    let eig = SymmetricEigen::new(DMatrix::identity(d, d) * (1.0 + alpha) - cov);
    if eig.eigenvalues.iter().any(|l| *l < -1e-12) {
        return None;
    }
    let root = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    let m = &eig.eigenvectors * root * eig.eigenvectors.transpose();
    let mut a = vec![0.0; vars.count()];
    for i in 0..n {
        a[vars.w(i)] = w[i];
        for j in 0..d {
            a[vars.x(i, j)] = x.row(i)[j];
        }
    }
    for j in 0..d {
        for k in 0..d {
            a[vars.m(j, k)] = m[(j, k)];
        }
    }
    Some(a)
}

/// Point mass with every point moved to μ̃ and no inliers, feasible at `T = n`.
pub fn upper_witness(basis: &MonomialBasis, y: &Dataset, mu_tilde: &[f64], alpha: f64) -> FunctionalRep {
    let moved = Dataset::new(y.dim, y.rows().flat_map(|_| mu_tilde.iter().copied()).collect()).expect("shape preserved");
    let a = mean_assignment(&vec![0.0; y.n()], &moved, alpha).expect("zero covariance");
    FunctionalRep::point_mass(basis, &a)
}

fn search(mu: Option<&[f64]>, y: &Dataset, cfg: &MeanScoreConfig, gamma: f64) -> Result<(ScoreSearch, crate::engine::CompiledSystem)> {
    let sys = mean_system(y, mu, cfg)?.compile()?;
    let res = compute_score_t(&sys, gamma, &cfg.ellipsoid)?;
    Ok((res, sys))
}

/// Full binary-search record for the score of `mu_tilde`.
pub fn sos_mean_search(mu_tilde: &[f64], y: &Dataset, cfg: &MeanScoreConfig) -> Result<ScoreSearch> {
    Ok(search(Some(mu_tilde), y, cfg, cfg.gamma / 3.0)?.0)
}

pub fn sos_mean_score(mu_tilde: &[f64], y: &Dataset, cfg: &MeanScoreConfig) -> Result<f64> {
    Ok(sos_mean_search(mu_tilde, y, cfg)?.t_hat)
}

/// Low-scoring center from the system without the closeness constraint: `μ̂ = L[μ']`.
pub fn sos_mean_low_scorer(y: &Dataset, cfg: &MeanScoreConfig) -> Result<(Vec<f64>, f64, f64)> {
    let (res, sys) = search(None, y, cfg, cfg.gamma / 3.0)?;
    let witness = match res.witness {
        Some((_, l)) => l,
        None => {
            let t = sys.system.t_max;
            let r = crate::engine::robust_ball_radius(&sys, t, cfg.gamma / 3.0);
            ellipsoid_search(&sys, t, r, cfg.gamma / 3.0, &cfg.ellipsoid)?
                .functional()
                .cloned()
                .ok_or_else(|| Error::ConstraintUnverified("no feasible functional at T = n".into()))?
        }
    };
    let vars = MeanVars { n: y.n(), d: y.dim };
    let mu_hat = (0..y.dim).map(|j| witness.apply(&sys.basis, &vars.mu(j))).collect::<Result<Vec<_>>>()?;
    Ok((mu_hat, cfg.phi, res.t_hat))
}

/// Score oracle over a candidate-mean domain.
#[derive(Clone, Debug)]
pub struct SosMeanScore {
    pub data: Dataset,
    pub cfg: MeanScoreConfig,
    pub domain: Domain,
}

impl SosMeanScore {
    pub fn new(data: Dataset, cfg: MeanScoreConfig, domain: Domain) -> Result<Self> {
        if domain.dim() != data.dim {
            return Err(Error::InvalidParameter("domain and data dimensions differ".into()));
        }
        cfg.validate(data.dim)?;
        Ok(SosMeanScore { data, cfg, domain })
    }
}

impl ScoreOracle for SosMeanScore {
    fn dim(&self) -> usize {
        self.data.dim
    }
    fn n(&self) -> usize {
        self.data.n()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn evaluate(&self, theta: &[f64], tol: f64) -> Result<f64> {
        let mut cfg = self.cfg.clone();
        if tol > 0.0 {
            cfg.gamma = cfg.gamma.min(tol);
        }
        sos_mean_score(theta, &self.data, &cfg)
    }
    fn low_scorer(&self) -> Result<LowScorer> {
        let (mu_hat, r, t) = sos_mean_low_scorer(&self.data, &self.cfg)?;
        let theta0 = self.domain.clamp_inside(&mu_hat, r);
        if theta0 == mu_hat {
            return Ok(LowScorer { theta0, radius: r, t_prime: t });
        }
        // the φ-box guarantee is about μ̂ itself, so re-measure around the moved center
        let mut worst = self.evaluate(&theta0, self.cfg.gamma)?;
        for j in 0..self.dim() {
            for s in [-r, r] {
                let mut p = theta0.clone();
                p[j] += s;
                worst = worst.max(self.evaluate(&p, self.cfg.gamma)?);
            }
        }
        Ok(LowScorer { theta0, radius: r, t_prime: t.max(worst - 1.0) })
    }
}
