//! Shared numeric primitives: stable log-domain helpers, the Gaussian
//! Q-function, and Gauss-Hermite quadrature.

use statrs::function::erf;

/// ln(1 + e^x), stable over the whole real line.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// ln(1 + e^-x) for x >= 0. For large x the ln_1p is skipped: the relative
/// error of `exp(-x)` alone is below f64 resolution once x > 20.
#[inline]
fn ln1p_exp_neg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x > 20.0 {
        (-x).exp()
    } else {
        (-x).exp().ln_1p()
    }
}

/// Exact LLR box-plus: 2 atanh(tanh(a/2) tanh(b/2)), evaluated through the
/// stable sign-min form with both logarithmic correction terms.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    let aa = a.abs();
    let ab = b.abs();
    let base = aa.min(ab) * if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    base + ln1p_exp_neg((a + b).abs()) - ln1p_exp_neg((a - b).abs())
}

/// Gaussian tail probability Q(x).
#[inline]
pub fn q(x: f64) -> f64 {
    0.5 * erf::erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of [`q`].
#[inline]
pub fn q_inv(p: f64) -> f64 {
    std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p)
}

/// Nodes and weights of the `n`-point Gauss-Hermite rule (physicists'
/// convention: integral of f(t) e^{-t^2} dt = sum w_i f(x_i)).
///
/// Newton iteration on the Hermite recurrence, symmetric roots mirrored.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = 0.751_125_544_464_943; // pi^(-1/4)
    let m = (n + 1) / 2;
    let mut z = 0.0f64;
    for i in 0..m {
        // initial guesses (Numerical Recipes)
        z = match i {
            0 => ((2 * n + 1) as f64).sqrt() - 1.85575 * ((2 * n + 1) as f64).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - ((j as f64) / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // return nodes ascending
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softplus_stable() {
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(softplus(800.0), 800.0);
        assert!(softplus(-800.0) >= 0.0);
        assert!((softplus(3.0) - (1.0f64 + 3.0f64.exp()).ln()).abs() < 1e-14);
    }

    #[test]
    fn boxplus_matches_tanh_form() {
        // moderate arguments: the tanh/atanh route is itself accurate
        let cases = [(0.3, -1.7), (4.0, 4.1), (-2.0, -2.0), (10.0, 0.01), (-6.3, 2.2)];
        for (a, b) in cases {
            let exact = 2.0 * ((a / 2.0f64).tanh() * (b / 2.0f64).tanh()).atanh();
            assert!((boxplus(a, b) - exact).abs() < 1e-12, "a={a} b={b}");
        }
        // large arguments: tanh saturates, so check against the shifted
        // log-sum-exp form ln(1+e^(a+b)) - ln(e^a + e^b)
        for (a, b) in [(35.0f64, 34.5f64), (40.0, -38.5), (-50.0, -49.0)] {
            let s = a + b;
            let hi = a.max(b);
            let exact = (s.max(0.0) + (-s.abs()).exp().ln_1p())
                - (hi + (a.min(b) - hi).exp().ln_1p());
            assert!((boxplus(a, b) - exact).abs() < 1e-12, "a={a} b={b}");
        }
    }

    #[test]
    fn q_and_inverse() {
        assert!((q(0.0) - 0.5).abs() < 1e-15);
        for x in [0.1, 1.0, 2.5, 5.0] {
            assert!((q_inv(q(x)) - x).abs() < 1e-9);
        }
    }

    #[test]
    fn gauss_hermite_integrates_moments() {
        let (x, w) = gauss_hermite(63);
        let total: f64 = w.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // integral of t^2 e^{-t^2} = sqrt(pi)/2
        let m2: f64 = x.iter().zip(&w).map(|(t, w)| w * t * t).sum();
        assert!((m2 - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }
}
