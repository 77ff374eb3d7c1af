//! Green kernels and the homogeneous propagator in cancellation-free form.
//!
//! With `d = α − β` and `m(s) = expm1(−d s)/d`, the non-oscillatory kernels
//! become `g = e^{−βs}(1 + α m)` and `G = −e^{−βs} m`. Both stay accurate as
//! `d → 0`, where the textbook two-exponential quotients cancel.

use std::f64::consts::PI;

use super::{RegimeData, Roots};

impl RegimeData {
    /// Velocity kernel `g(s) = G'(s)`, with `g(0) = 1`.
    pub fn velocity_kernel(&self, s: f64) -> f64 {
        match self.roots {
            Roots::Real { alpha, beta } => {
                let m = expm1_ratio(alpha - beta, s);
                (-beta * s).exp() * (1.0 + alpha * m)
            }
            Roots::Double { rate } => (-rate * s).exp() * (1.0 - rate * s),
            Roots::Complex { gamma, omega } => {
                let (sn, cs) = (omega * s).sin_cos();
                (-gamma * s).exp() * (cs - gamma / omega * sn)
            }
        }
    }

    /// Position kernel `G(s)`: impulse response with `G(0) = 0`, `G'(0) = 1`.
    pub fn position_kernel(&self, s: f64) -> f64 {
        match self.roots {
            Roots::Real { alpha, beta } => -(-beta * s).exp() * expm1_ratio(alpha - beta, s),
            Roots::Double { rate } => s * (-rate * s).exp(),
            Roots::Complex { gamma, omega } => (-gamma * s).exp() * (omega * s).sin() / omega,
        }
    }

    /// Free response of the position to unit initial displacement:
    /// `g(s) + c G(s)`.
    pub fn displacement_kernel(&self, s: f64) -> f64 {
        match self.roots {
            Roots::Real { alpha, beta } => {
                let m = expm1_ratio(alpha - beta, s);
                (-beta * s).exp() * (1.0 - beta * m)
            }
            Roots::Double { rate } => (-rate * s).exp() * (1.0 + rate * s),
            Roots::Complex { gamma, omega } => {
                let (sn, cs) = (omega * s).sin_cos();
                (-gamma * s).exp() * (cs + gamma / omega * sn)
            }
        }
    }

    /// `∫₀^s G(τ) dτ = (1 − g(s) − c G(s)) / b`; tends to `1/b`.
    pub fn position_primitive(&self, s: f64) -> f64 {
        if s == f64::INFINITY {
            return 1.0 / self.stiffness();
        }
        // For small s, 1 − (g + cG) cancels; sum the Taylor series of G
        // instead. With t_k = a_k s^k from G = Σ a_k s^k:
        // t_{k+2} = −(c(k+1) s t_{k+1} + b s² t_k) / ((k+2)(k+1)).
        let c = self.params.c;
        let b = self.stiffness();
        if s * (c + b.sqrt()) < 0.1 {
            let (mut t0, mut t1) = (0.0, s);
            let mut sum = 0.5 * t1;
            for k in 0..40 {
                let kf = k as f64;
                let t2 = -(c * (kf + 1.0) * s * t1 + b * s * s * t0) / ((kf + 2.0) * (kf + 1.0));
                let term = t2 / (kf + 3.0);
                sum += term;
                // Single coefficients can vanish exactly; require two in a row.
                if t1.abs() + t2.abs() <= 1e-3 * f64::EPSILON * sum.abs() {
                    break;
                }
                (t0, t1) = (t1, t2);
            }
            return s * sum;
        }
        -(self.displacement_kernel(s) - 1.0) / b
    }

    /// Homogeneous propagator over `t` acting on `(u, v)`:
    /// `[[g + cG, G], [−bG, g]]`.
    pub fn propagator(&self, t: f64) -> [[f64; 2]; 2] {
        let big_g = self.position_kernel(t);
        [
            [self.displacement_kernel(t), big_g],
            [-self.stiffness() * big_g, self.velocity_kernel(t)],
        ]
    }

    /// Zeros in `(0, horizon]` of `h(s) = p·g(s) + q·G(s)`, increasing.
    ///
    /// Every free velocity response is of this form, so the routine also
    /// locates interior velocity extrema of closed-form segment solutions
    /// (their derivative is again such a combination).
    pub fn combination_zeros(&self, p: f64, q: f64, horizon: f64) -> Vec<f64> {
        if !(horizon > 0.0) || (p == 0.0 && q == 0.0) {
            return Vec::new();
        }
        match self.roots {
            Roots::Real { alpha, beta } => {
                // h ∝ e^{−αs}(pα − q) − e^{−βs}(pβ − q), so
                // e^{−(α−β)s} = (pβ − q)/(pα − q).
                let d = alpha - beta;
                let den = p * beta - q;
                if den == 0.0 {
                    return Vec::new();
                }
                let x = p * d / den;
                if !(x > 0.0) || !x.is_finite() {
                    return Vec::new();
                }
                let s = x.ln_1p() / d;
                if s > 0.0 && s <= horizon {
                    vec![s]
                } else {
                    Vec::new()
                }
            }
            Roots::Double { rate } => {
                // h = e^{−rs}(p + s (q − p r))
                let den = p * rate - q;
                if den == 0.0 {
                    return Vec::new();
                }
                let s = p / den;
                if s > 0.0 && s <= horizon {
                    vec![s]
                } else {
                    Vec::new()
                }
            }
            Roots::Complex { gamma, omega } => {
                // h = e^{−γs}(A cos ωs + B sin ωs) = e^{−γs} R sin(ωs + ψ)
                let a = p;
                let bb = (q - p * gamma) / omega;
                let psi = a.atan2(bb);
                let mut theta = (-psi).rem_euclid(PI);
                if theta == 0.0 {
                    theta = PI;
                }
                (0..)
                    .map(|k| (theta + k as f64 * PI) / omega)
                    .take_while(|&s| s <= horizon)
                    .collect()
            }
        }
    }
}

/// `expm1(−d s)/d`, with the limit `−s` at `d = 0`.
fn expm1_ratio(d: f64, s: f64) -> f64 {
    if d == 0.0 {
        -s
    } else {
        (-d * s).exp_m1() / d
    }
}
