//! Parameter sequences under which the high-mode spectral decay estimate is
//! proved, and the resulting short transient `t*_N`.

use std::fmt;

use crate::error::{Error, Result};

/// Regularity class of the initial vorticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrability {
    /// `omega_0 in L^p`, `1 < p <= inf`.
    Lp(f64),
    /// Arbitrary `H^-1` data, e.g. measures.
    Measure,
}

impl Integrability {
    /// Loss exponent `nu(p)`.
    pub fn nu(&self) -> f64 {
        match *self {
            Integrability::Lp(p) if p >= 2.0 => 0.0,
            Integrability::Lp(p) => 2.0 * (2.0 / p - 1.0),
            Integrability::Measure => 2.0,
        }
    }
}

impl fmt::Display for Integrability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrability::Lp(p) if p.is_infinite() => write!(f, "inf"),
            Integrability::Lp(p) => write!(f, "{p}"),
            Integrability::Measure => write!(f, "measure"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    pub integrability: Integrability,
    /// Growth exponent of `m_N ~ N^theta`.
    pub theta: f64,
    /// Log exponent in `eps_N ~ a_N^{nu/2} log(N)^s / N`.
    pub s: f64,
    /// Calibration constant in `t*_N`; not computable a priori.
    pub b: f64,
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams {
            integrability: Integrability::Lp(2.0),
            theta: 0.4,
            s: 7.0,
            b: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub n: f64,
    pub valid: bool,
    /// Named inequalities that fail.
    pub violations: Vec<String>,
    pub nu: f64,
    pub theta_bound: f64,
    pub m_n: f64,
    pub a_n: f64,
    pub eps_n: f64,
    /// Log exponent `r`, midpoint of `(s + 2, 2s - 4]`.
    pub r: f64,
    /// Free parameter of the decay estimate (not the cutoff sharpness).
    pub decay_alpha: f64,
    pub beta_n: f64,
    pub t_star: f64,
}

impl RegimeReport {
    /// `t*_N a_N^{nu/2} N log(N)^2`, which the theory drives to zero.
    pub fn scaled_t_star(&self) -> f64 {
        let ln_n = self.n.ln();
        self.t_star * self.a_n.powf(self.nu / 2.0) * self.n * ln_n * ln_n
    }

    /// `key = value` lines.
    pub fn key_values(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", format!("{}", self.n)),
            ("valid", self.valid.to_string()),
            ("nu", format!("{:e}", self.nu)),
            ("theta_bound", format!("{:e}", self.theta_bound)),
            ("m_n", format!("{:e}", self.m_n)),
            ("a_n", format!("{:e}", self.a_n)),
            ("eps_n", format!("{:e}", self.eps_n)),
            ("r", format!("{:e}", self.r)),
            ("decay_alpha", format!("{:e}", self.decay_alpha)),
            ("beta_n", format!("{:e}", self.beta_n)),
            ("t_star", format!("{:e}", self.t_star)),
        ]
    }
}

/// Evaluates the parameter sequences at `N`. Invalid regimes are reported,
/// not rejected; see [`validate_regime`].
pub fn evaluate_regime(params: &RegimeParams, n: u64) -> Result<RegimeReport> {
    if n < 4 {
        return Err(Error::InvalidRegime(format!("N must be >= 4, got {n}")));
    }
    evaluate(params, n as f64, (n as f64).ln())
}

/// Same as [`evaluate_regime`] with `N = exp(ln_n)`, for asymptotic checks at
/// sizes beyond any integer type.
pub fn evaluate_regime_ln(params: &RegimeParams, ln_n: f64) -> Result<RegimeReport> {
    evaluate(params, ln_n.exp(), ln_n)
}

fn evaluate(params: &RegimeParams, n: f64, ln_n: f64) -> Result<RegimeReport> {
    if let Integrability::Lp(p) = params.integrability {
        if !(p > 1.0) {
            return Err(Error::InvalidRegime(format!("p must exceed 1, got {p}")));
        }
    }
    if !(params.b > 0.0) {
        return Err(Error::InvalidRegime(format!("B must be positive, got {}", params.b)));
    }
    let nu = params.integrability.nu();
    let theta_bound = 1.0 / (2.0 + nu / 2.0);
    let mut violations = Vec::new();
    if !(params.theta >= 0.0) {
        violations.push(format!("theta = {} < 0", params.theta));
    }
    if !(params.theta < theta_bound) {
        violations.push(format!(
            "theta < (2 + nu/2)^-1 fails: {} >= {}",
            params.theta, theta_bound
        ));
    }
    if !(params.s > 6.0) {
        violations.push(format!("s > 6 fails: s = {}", params.s));
    }

    let n_theta = if n.is_finite() {
        n.powf(params.theta)
    } else {
        (params.theta * ln_n).exp()
    };
    let m_n = n_theta.floor();
    let a_n = if nu != 0.0 { n_theta } else { n };
    let a_half = a_n.powf(nu / 2.0);
    let eps_n = a_half * ln_n.powf(params.s) / n;
    let r = (params.s + 2.0 + 2.0 * params.s - 4.0) / 2.0;
    let decay_alpha = a_half * ln_n.powf(r / 2.0);
    let beta_n = decay_alpha * decay_alpha + 8.0 * eps_n * eps_n * m_n * m_n;
    let t_star = (eps_n / beta_n) * (beta_n / (params.b * a_n.powf(nu) * ln_n)).ln_1p();

    Ok(RegimeReport {
        n,
        valid: violations.is_empty(),
        violations,
        nu,
        theta_bound,
        m_n,
        a_n,
        eps_n,
        r,
        decay_alpha,
        beta_n,
        t_star,
    })
}

/// Like [`evaluate_regime`], but an invalid parameter choice is an error
/// naming the failed inequality.
pub fn validate_regime(params: &RegimeParams, n: u64) -> Result<RegimeReport> {
    let report = evaluate_regime(params, n)?;
    if !report.valid {
        return Err(Error::InvalidRegime(report.violations.join("; ")));
    }
    Ok(report)
}
