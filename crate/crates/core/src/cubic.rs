//! Real roots of the depressed cubic `a·x³ + b·x = c`.
//!
//! This is the shape of every self-consistent resonance condition in the
//! crate. Near the critically anomalous point `b → 0` and the linear term
//! vanishes, so the closed forms are arranged to avoid cancellation and are
//! followed by a guarded Newton polish.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    roots: [f64; 3],
    count: usize,
}

impl CubicRoots {
    fn none() -> Self {
        Self {
            roots: [0.0; 3],
            count: 0,
        }
    }

    fn one(x: f64) -> Self {
        Self {
            roots: [x, 0.0, 0.0],
            count: 1,
        }
    }

    fn three(mut r: [f64; 3]) -> Self {
        r.sort_by(f64::total_cmp);
        Self { roots: r, count: 3 }
    }

    /// Distinct real roots in ascending order.
    pub fn as_slice(&self) -> &[f64] {
        &self.roots[..self.count]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

fn residual(a: f64, b: f64, c: f64, x: f64) -> f64 {
    (a * x * x + b) * x - c
}

fn polish(a: f64, b: f64, c: f64, mut x: f64) -> f64 {
    let mut r = residual(a, b, c, x);
    for _ in 0..4 {
        if r == 0.0 {
            break;
        }
        let d = 3.0 * a * x * x + b;
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let nx = x - r / d;
        let nr = residual(a, b, c, nx);
        if nr.abs() < r.abs() {
            x = nx;
            r = nr;
        } else {
            break;
        }
    }
    x
}

/// Bisection on a sign-changing bracket, run until the interval stops shrinking.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All distinct real roots of `a·x³ + b·x = c`.
///
/// `a = 0` degenerates to the linear equation; `a = b = 0` has no isolated root.
pub fn real_roots(a: f64, b: f64, c: f64) -> CubicRoots {
    if a == 0.0 {
        return if b == 0.0 {
            CubicRoots::none()
        } else {
            CubicRoots::one(c / b)
        };
    }
    // x³ + p·x + q = 0
    let p = b / a;
    let q = -c / a;

    if c == 0.0 {
        return if p < 0.0 {
            let s = (-p).sqrt();
            CubicRoots::three([-s, 0.0, s])
        } else {
            CubicRoots::one(0.0)
        };
    }

    // poorly conditioned near-pure cubic: bisection on the monotone bracket
    if b == 0.0 || b.abs() < 1e-8 * a.abs().cbrt() * c.abs().powf(2.0 / 3.0) {
        let x0 = (c / a).cbrt();
        if p >= 0.0 || x0.abs() * x0.abs() > -3.0 * p {
            let hi = 2.0 * x0;
            let x = bisect(|x| residual(a, b, c, x), 0.0, hi);
            return CubicRoots::one(x);
        }
    }

    let half_q = 0.5 * q;
    if p > 0.0 {
        let s = (p / 3.0) * (p / 3.0).sqrt();
        let t = (-half_q - half_q.signum() * half_q.hypot(s)).cbrt();
        let p3 = p / 3.0;
        let x = -q / (t * t + p3 + p3 * p3 / (t * t));
        return CubicRoots::one(polish(a, b, c, x));
    }

    let m = (-p / 3.0).sqrt();
    let m3 = m * m * m;
    if half_q.abs() > m3 {
        let sd = ((half_q.abs() - m3) * (half_q.abs() + m3)).sqrt();
        let t = (-half_q - half_q.signum() * sd).cbrt();
        let x = t + m * m / t;
        CubicRoots::one(polish(a, b, c, x))
    } else {
        let theta = (-half_q / m3).clamp(-1.0, 1.0).acos();
        let r = [0.0, 1.0, 2.0].map(|k: f64| {
            let x = 2.0 * m * (theta / 3.0 - 2.0 * PI * k / 3.0).cos();
            polish(a, b, c, x)
        });
        CubicRoots::three(r)
    }
}
