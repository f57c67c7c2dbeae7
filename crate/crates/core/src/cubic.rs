//! Roots of a monic cubic with real coefficients.
//!
//! A real root is isolated by safeguarded Newton iteration inside a Cauchy
//! bracket, the quotient quadratic is solved without cancellation, and every
//! root is polished by one Newton step on the undeflated cubic.

use num_complex::Complex64;

/// `x³ + c2·x² + c1·x + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonicCubic {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl MonicCubic {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        ((x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn derivative(&self, x: Complex64) -> Complex64 {
        (3.0 * x + 2.0 * self.c2) * x + self.c1
    }

    fn eval_real(&self, x: f64) -> (f64, f64) {
        let f = ((x + self.c2) * x + self.c1) * x + self.c0;
        let df = (3.0 * x + 2.0 * self.c2) * x + self.c1;
        (f, df)
    }

    /// `Π (z_i - z_j)²` from the coefficients, with the magnitude of the
    /// largest term entering the sum.
    pub fn discriminant(&self) -> (f64, f64) {
        let (b, c, d) = (self.c2, self.c1, self.c0);
        let terms = [
            18.0 * b * c * d,
            -4.0 * b * b * b * d,
            b * b * c * c,
            -4.0 * c * c * c,
            -27.0 * d * d,
        ];
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        (terms.iter().sum(), scale)
    }

    /// False when the discriminant is indistinguishable from zero at double
    /// precision, i.e. the cubic has a numerically repeated root.
    pub fn discriminant_is_resolved(&self) -> bool {
        let (disc, scale) = self.discriminant();
        disc.abs() > 64.0 * f64::EPSILON * scale
    }

    /// All three roots, real one first, complex roots as a conjugate pair.
    pub fn roots(&self) -> [Complex64; 3] {
        let x = self.real_root();
        // x² + q1·x + q0 after dividing out (x - root)
        let q1 = self.c2 + x;
        let q0 = self.c1 + x * q1;
        let [r1, r2] = quadratic_roots(q1, q0);
        [Complex64::new(x, 0.0), self.polish(r1), self.polish(r2)]
    }

    fn polish(&self, z: Complex64) -> Complex64 {
        let d = self.derivative(z);
        if d.norm() == 0.0 {
            return z;
        }
        let next = z - self.eval(z) / d;
        if self.eval(next).norm() <= self.eval(z).norm() {
            next
        } else {
            z
        }
    }

    fn real_root(&self) -> f64 {
        let bound = 1.0 + self.c2.abs().max(self.c1.abs()).max(self.c0.abs());
        let (mut lo, mut hi) = (-bound, bound);
        // f(-bound) < 0 < f(bound) for a monic cubic
        let mut x = -self.c2 / 3.0;
        x = x.clamp(lo, hi);
        for _ in 0..200 {
            let (f, df) = self.eval_real(x);
            if f == 0.0 {
                return x;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - f / df;
            let next = if df != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if next == x || hi - lo <= f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                return next;
            }
            x = next;
        }
        x
    }
}

/// Roots of `x² + b·x + c` avoiding cancellation.
fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}
