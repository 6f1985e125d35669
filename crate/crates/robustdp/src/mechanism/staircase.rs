//! Acceptance probability `g` of the approximate mechanism and the truncated weight `h`.
//!
//! With `m = η*n`:
//!
//! ```text
//! g(t) = 1                                 t < 0.3m
//!        max(1/2, 1 − δ e^{ε(t − 0.3m)})   0.3m ≤ t ≤ 0.5m
//!        min(1/2, δ e^{ε(0.7m − t)})       0.5m < t ≤ 0.7m
//!        0                                 t > 0.7m
//! ```
//!
//! At `t = 0.7m` the min-branch gives `δ`, which keeps the step down to 0
//! within the additive `δ` slack.

use super::PrivacyParams;

pub fn staircase_g(t: f64, p: &PrivacyParams) -> f64 {
    let m = p.eta_star * p.n as f64;
    let (a, b, c) = (0.3 * m, 0.5 * m, 0.7 * m);
    if t < a {
        1.0
    } else if t <= b {
        f64::max(0.5, 1.0 - p.delta * (p.epsilon * (t - a)).exp())
    } else if t <= c {
        f64::min(0.5, p.delta * (p.epsilon * (c - t)).exp())
    } else {
        0.0
    }
}

pub fn truncated_h(t: f64, p: &PrivacyParams) -> f64 {
    if t <= 0.9 * p.eta_star * p.n as f64 {
        (-p.epsilon * t).exp()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, eta_star: f64, epsilon: f64, delta: f64) -> PrivacyParams {
        PrivacyParams { epsilon, delta, beta: 0.1, eta: eta_star / 10.0, eta_star, n }
    }

    #[test]
    fn examples() {
        let p = params(100, 0.5, 1.0, 1e-6);
        assert_eq!(staircase_g(0.0, &p), 1.0);
        assert_eq!(staircase_g(100.0, &p), 0.0);
        let want = 1.0 - 1e-6 * 5f64.exp();
        assert!((staircase_g(20.0, &p) - want).abs() < 1e-15);
        assert_eq!(truncated_h(0.0, &p), 1.0);
        assert_eq!(truncated_h(50.0, &p), 0.0);
        assert_eq!(truncated_h(3.0, &p), (-3f64).exp());
    }

    #[test]
    fn monotone_nonincreasing() {
        let p = params(400, 0.5, 1.0, 1e-6);
        let mut prev = 1.0;
        for t in 0..=400 {
            let g = staircase_g(t as f64, &p);
            assert!(g <= prev && (0.0..=1.0).contains(&g));
            prev = g;
        }
    }

    #[test]
    fn dp_inequality_in_the_large_n_regime() {
        let p = params(3000, 0.5, 0.5, 1e-6);
        assert!(p.n as f64 >= 40.0 * (1.0 / p.delta).ln() / (p.eta_star * p.epsilon));
        for t in 0..p.n {
            let (g0, g1) = (staircase_g(t as f64, &p), staircase_g(t as f64 + 1.0, &p));
            let e = p.epsilon.exp();
            assert!(g0 <= e * g1 + p.delta && (-p.epsilon).exp() * g1 - p.delta <= g0, "t={t}");
        }
    }
}
