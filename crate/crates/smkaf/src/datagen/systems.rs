//! Nonlinear benchmark systems for identification experiments.

use super::{normal, rng_from, Sequence};

/// First-order nonlinear recursion `d(i) = d(i-1)/(1 + d(i-1)^2) + x^3(i-1)`
/// driven by i.i.d. Gaussian scalar inputs.
///
/// Pair `t` couples the input `x(t)` with the next recursion output, so the
/// desired signal is predictable from the paired input. The recursion starts
/// from its fixed point `d(0) = 0` and propagates the clean state; the
/// observation noise only corrupts the emitted outputs.
pub fn nonlinear_system1(n: usize, sigma_x: f64, sigma_n: f64, seed: u64) -> Sequence {
    let mut rng = rng_from(seed);
    let mut inputs = Vec::with_capacity(n);
    let mut desired = Vec::with_capacity(n);
    let mut d = 0.0f64;
    for _ in 0..n {
        let x = normal(&mut rng, sigma_x);
        d = d / (1.0 + d * d) + x * x * x;
        inputs.push(vec![x]);
        desired.push(d + normal(&mut rng, sigma_n));
    }
    Sequence {
        inputs,
        desired,
        noise_std: sigma_n,
        seed,
    }
}

/// Non-stationary switching system: the nonlinear recursion of
/// [`nonlinear_system1`], then an unstable drift segment
/// `d(i) = d(i-1) + 0.1`, then `d(i) = x^2(i)`.
pub fn switching_system(
    n1: usize,
    n_unstable: usize,
    n2: usize,
    sigma_x: f64,
    sigma_n: f64,
    seed: u64,
) -> Sequence {
    let n = n1 + n_unstable + n2;
    let mut rng = rng_from(seed);
    let mut inputs = Vec::with_capacity(n);
    let mut desired = Vec::with_capacity(n);
    let mut d = 0.0f64;
    for t in 0..n {
        let x = normal(&mut rng, sigma_x);
        if t < n1 {
            d = d / (1.0 + d * d) + x * x * x;
        } else if t < n1 + n_unstable {
            d += 0.1;
        } else {
            d = x * x;
        }
        inputs.push(vec![x]);
        desired.push(d + normal(&mut rng, sigma_n));
    }
    Sequence {
        inputs,
        desired,
        noise_std: sigma_n,
        seed,
    }
}

/// Saturation-type nonlinearity applied to the linear stage output.
fn correlated_nonlinearity(y: f64) -> f64 {
    if y >= 0.0 {
        y / (3.0 * (0.1 + 0.9 * y * y).sqrt())
    } else {
        -y * y * (1.0 - (0.7 * y).exp()) / 3.0
    }
}

/// Correlated-input Wiener-type system; returns the weakly and the strongly
/// correlated input stream.
///
/// Components are built to unit variance: the innovations `delta` absorb what
/// the cross terms leave, 1 - 0.25 = 0.75 for `x2 = 0.5 x1 + delta` and
/// 1 - 0.28 = 0.72 for `x3 = 0.2 x1 + 0.4 x2 + delta`. Both streams pass
/// through `y(i) = r^T x(i) - 0.3 y(i-1) + 0.35 y(i-2)` with
/// `r = [1, 0.5, 0.3]`, then a piecewise saturation nonlinearity.
pub fn correlated_input_system(n: usize, sigma_n: f64, seed: u64) -> (Sequence, Sequence) {
    let r = [1.0, 0.5, 0.3];

    let gen = |stream: u64, strongly: bool| {
        let mut rng = rng_from(seed.wrapping_add(stream));
        let mut inputs = Vec::with_capacity(n);
        let mut desired = Vec::with_capacity(n);
        let (mut y1, mut y2) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let x1 = normal(&mut rng, 1.0);
            let x2 = 0.5 * x1 + normal(&mut rng, 0.75f64.sqrt());
            let x3 = if strongly {
                0.2 * x1 + 0.4 * x2 + normal(&mut rng, 0.72f64.sqrt())
            } else {
                normal(&mut rng, 1.0)
            };
            let x = [x1, x2, x3];
            let y = r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() - 0.3 * y1 + 0.35 * y2;
            y2 = y1;
            y1 = y;
            inputs.push(x.to_vec());
            desired.push(correlated_nonlinearity(y) + normal(&mut rng, sigma_n));
        }
        Sequence {
            inputs,
            desired,
            noise_std: sigma_n,
            seed,
        }
    };

    (gen(0, false), gen(1, true))
}

/// Linear stage of the Hammerstein benchmark, 24 taps.
pub const HAMMERSTEIN_COEFFS: [f64; 24] = [
    1.0, 0.5, 0.3, 0.1, 0.1, -0.2, -0.2, -0.15, 0.1, -0.15, 0.12, -0.09, 0.1, -0.15, 0.1, 0.05,
    -0.05, 0.15, 0.1, 0.03, -0.12, 0.1, -0.02, -0.01,
];

/// Hammerstein cascade with the default noise level (`sigma_n^2 = 1e-6`,
/// reading the stated noise figure as a variance) and input variance
/// `sigma_x^2 = 4e-4`.
pub fn hammerstein_system(n: usize, seed: u64) -> Sequence {
    hammerstein_system_with(n, (4e-4f64).sqrt(), (1e-6f64).sqrt(), seed)
}

/// Hammerstein cascade: a cubic static nonlinearity feeding a fixed
/// 24-coefficient linear stage.
pub fn hammerstein_system_with(n: usize, sigma_x: f64, sigma_n: f64, seed: u64) -> Sequence {
    let mut rng = rng_from(seed);
    let mut inputs = Vec::with_capacity(n);
    let mut desired = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..24).map(|_| normal(&mut rng, sigma_x)).collect();
        let d: f64 = HAMMERSTEIN_COEFFS
            .iter()
            .zip(&x)
            .map(|(s, v)| s * v * v * v)
            .sum();
        inputs.push(x);
        desired.push(d + normal(&mut rng, sigma_n));
    }
    Sequence {
        inputs,
        desired,
        noise_std: sigma_n,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn system1_zero_input_stays_at_fixed_point() {
        let seq = nonlinear_system1(50, 0.0, 0.0, 1);
        assert!(seq.desired.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn system1_single_step_is_cubed_input() {
        let seq = nonlinear_system1(1, 0.3, 0.0, 7);
        let x = seq.inputs[0][0];
        assert_relative_eq!(seq.desired[0], x * x * x, max_relative = 1e-15);
    }

    #[test]
    fn system1_is_deterministic() {
        let a = nonlinear_system1(64, 0.15f64.sqrt(), 0.01, 42);
        let b = nonlinear_system1(64, 0.15f64.sqrt(), 0.01, 42);
        assert_eq!(a, b);
    }

    #[test]
    fn system1_variance_is_bounded() {
        // No drift: the recursion's memory term is globally contracting
        // (|d/(1+d^2)| <= 1/2), so the sample variance stays small.
        let seq = nonlinear_system1(100_000, 0.5, 0.0, 3);
        let mean = seq.desired.iter().sum::<f64>() / seq.len() as f64;
        let var = seq
            .desired
            .iter()
            .map(|d| (d - mean) * (d - mean))
            .sum::<f64>()
            / seq.len() as f64;
        assert!(var.is_finite() && var < 1.0, "variance {var} out of range");
        // First and second halves agree in scale: no drift.
        let half = seq.len() / 2;
        let v = |s: &[f64]| s.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / half as f64;
        let (v1, v2) = (v(&seq.desired[..half]), v(&seq.desired[half..]));
        assert!(v1 / v2 < 3.0 && v2 / v1 < 3.0, "drift: {v1} vs {v2}");
    }

    #[test]
    fn switching_segments_and_total_length() {
        let (n1, nu, n2) = (100, 50, 80);
        let seq = switching_system(n1, nu, n2, 0.15, 0.0, 5);
        assert_eq!(seq.len(), n1 + nu + n2);
        // Unstable segment increments by exactly 0.1 per step, noise-free.
        for t in (n1 + 1)..(n1 + nu) {
            assert_relative_eq!(
                seq.desired[t] - seq.desired[t - 1],
                0.1,
                max_relative = 1e-12
            );
        }
        // Phase 2 with x = 0 would be zero; with noise-free generation it is x^2.
        for t in (n1 + nu)..seq.len() {
            assert_relative_eq!(
                seq.desired[t],
                seq.inputs[t][0] * seq.inputs[t][0],
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn switching_phase2_zero_input_gives_zero() {
        let seq = switching_system(1, 1, 30, 0.0, 0.0, 5);
        for t in 2..seq.len() {
            assert_eq!(seq.desired[t], 0.0);
        }
    }

    #[test]
    fn correlated_nonlinearity_anchor_points() {
        assert_eq!(correlated_nonlinearity(0.0), 0.0);
        assert_relative_eq!(correlated_nonlinearity(1.0), 1.0 / 3.0, max_relative = 1e-15);
        // The negative branch meets zero at the origin too.
        assert!(correlated_nonlinearity(-1e-9).abs() < 1e-12);
    }

    #[test]
    fn correlated_streams_have_designed_correlation() {
        // Analytic oracle: corr(x1, x2) = 0.5 with unit component variances.
        let n = 100_000;
        let (s1, s2) = correlated_input_system(n, 0.0, 11);
        for seq in [&s1, &s2] {
            let (mut c12, mut v1, mut v2) = (0.0, 0.0, 0.0);
            for x in &seq.inputs {
                c12 += x[0] * x[1];
                v1 += x[0] * x[0];
                v2 += x[1] * x[1];
            }
            let corr = c12 / (v1.sqrt() * v2.sqrt());
            assert_relative_eq!(corr, 0.5, max_relative = 0.02);
        }
        // The second stream's third component is driven by the first two.
        let mut c13 = 0.0;
        for x in &s2.inputs {
            c13 += x[0] * x[2];
        }
        assert!(c13 / n as f64 > 0.2, "x3 should correlate with x1");
    }

    #[test]
    fn hammerstein_zero_input_gives_zero() {
        let seq = hammerstein_system_with(10, 0.0, 0.0, 1);
        assert!(seq.desired.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn hammerstein_first_unit_direction() {
        // d = s_1 c^3 for x = c e_1 with s_1 = 1.
        let c = 0.02;
        let mut x = vec![0.0; 24];
        x[0] = c;
        let d: f64 = HAMMERSTEIN_COEFFS
            .iter()
            .zip(&x)
            .map(|(s, v)| s * v * v * v)
            .sum();
        assert_relative_eq!(d, c * c * c, max_relative = 1e-15);
    }

    #[test]
    fn hammerstein_coefficients_double_transcription() {
        // Independent transcription of the tap table, assignment by index.
        let mut s = [0.0f64; 24];
        s[0] = 1.0;
        s[1] = 0.5;
        s[2] = 0.3;
        for i in [3, 4, 8, 12, 14, 18, 21] {
            s[i] = 0.1;
        }
        s[5] = -0.2;
        s[6] = -0.2;
        for i in [7, 9, 13] {
            s[i] = -0.15;
        }
        s[17] = 0.15;
        s[10] = 0.12;
        s[11] = -0.09;
        s[15] = 0.05;
        s[16] = -0.05;
        s[19] = 0.03;
        s[20] = -0.12;
        s[22] = -0.02;
        s[23] = -0.01;
        assert_eq!(s, HAMMERSTEIN_COEFFS);
    }
}
