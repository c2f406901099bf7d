//! Quasi-Newton minimization with a strong-Wolfe line search.

/// Stopping rules and line-search constants.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OptimizerSettings {
    /// Stop when the Euclidean gradient norm falls below this.
    pub gradient_norm_tolerance: f64,
    /// Stop when the largest component of an accepted step falls below this.
    pub parameter_tolerance: f64,
    /// Budget of objective-plus-gradient evaluations.
    pub max_evaluations: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            gradient_norm_tolerance: 1e-8,
            parameter_tolerance: 1e-10,
            max_evaluations: 20_000,
            c1: 1e-4,
            c2: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub evaluations: usize,
    pub iterations: usize,
    /// Stopped on the gradient or step tolerance.
    pub converged: bool,
    pub budget_exhausted: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Point {
    a: f64,
    f: f64,
    g: Vec<f64>,
    d: f64,
}

struct Search<'a, F> {
    f: &'a mut F,
    x: &'a [f64],
    p: &'a [f64],
    f0: f64,
    d0: f64,
    c1: f64,
    c2: f64,
    evals: &'a mut usize,
    budget: usize,
}

impl<F: FnMut(&[f64]) -> (f64, Vec<f64>)> Search<'_, F> {
    fn eval(&mut self, a: f64) -> Option<Point> {
        if *self.evals >= self.budget {
            return None;
        }
        *self.evals += 1;
        let xa: Vec<f64> = self.x.iter().zip(self.p).map(|(x, p)| x + a * p).collect();
        let (f, g) = (self.f)(&xa);
        let d = dot(&g, self.p);
        Some(Point { a, f, g, d })
    }

    fn armijo(&self, pt: &Point) -> bool {
        pt.f <= self.f0 + self.c1 * pt.a * self.d0
    }

    fn curvature(&self, pt: &Point) -> bool {
        pt.d.abs() <= -self.c2 * self.d0
    }

    /// Returns an accepted point, or the best sufficient-decrease point seen
    /// when the search cannot satisfy both conditions.
    fn run(&mut self, a_init: f64) -> Option<Point> {
        let mut prev = Point {
            a: 0.0,
            f: self.f0,
            g: vec![],
            d: self.d0,
        };
        let mut a = a_init;
        let mut fallback: Option<Point> = None;
        for i in 0..40 {
            let pt = self.eval(a)?;
            if !pt.f.is_finite() {
                a = 0.5 * (prev.a + a);
                continue;
            }
            if !self.armijo(&pt) || (i > 0 && pt.f >= prev.f) {
                return self.zoom(prev, pt, fallback);
            }
            if self.curvature(&pt) {
                return Some(pt);
            }
            if pt.d >= 0.0 {
                return self.zoom(pt, prev, fallback);
            }
            a = (2.0 * a).min(a + 10.0);
            fallback = Some(Point { g: pt.g.clone(), ..pt });
            prev = pt;
        }
        fallback
    }

    fn zoom(&mut self, mut lo: Point, mut hi: Point, mut fallback: Option<Point>) -> Option<Point> {
        if lo.a != 0.0 && self.armijo(&lo) && fallback.as_ref().is_none_or(|fb| lo.f < fb.f) {
            fallback = Some(Point { g: lo.g.clone(), ..lo });
        }
        for _ in 0..40 {
            let (a_lo, a_hi) = (lo.a, hi.a);
            let width = (a_hi - a_lo).abs();
            if width < 1e-16 * a_lo.abs().max(1.0) {
                break;
            }
            let a = cubic_min(&lo, &hi)
                .filter(|a| {
                    let (l, h) = (a_lo.min(a_hi), a_lo.max(a_hi));
                    *a > l + 0.1 * width && *a < h - 0.1 * width
                })
                .unwrap_or(0.5 * (a_lo + a_hi));
            let pt = match self.eval(a) {
                Some(p) => p,
                None => break,
            };
            if !self.armijo(&pt) || pt.f >= lo.f {
                hi = pt;
            } else {
                if self.curvature(&pt) {
                    return Some(pt);
                }
                if pt.d * (hi.a - lo.a) >= 0.0 {
                    hi = lo;
                }
                if fallback.as_ref().is_none_or(|fb| pt.f < fb.f) {
                    fallback = Some(Point { g: pt.g.clone(), ..pt });
                }
                lo = pt;
            }
        }
        fallback
    }
}

/// Minimizer of the cubic matching values and slopes at both ends.
fn cubic_min(p: &Point, q: &Point) -> Option<f64> {
    let (a, b) = (p.a, q.a);
    let d1 = p.d + q.d - 3.0 * (p.f - q.f) / (a - b);
    let disc = d1 * d1 - p.d * q.d;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let denom = q.d - p.d + 2.0 * d2;
    if denom == 0.0 {
        return None;
    }
    let t = b - (b - a) * (q.d + d2 - d1) / denom;
    t.is_finite().then_some(t)
}

/// Minimizes `f`, which returns the value and gradient at a point.
/// The result is never worse than `x0`.
pub fn minimize<F>(mut f: F, x0: &[f64], settings: &OptimizerSettings) -> Minimum
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x);
    let mut evals = 1;
    let mut iterations = 0;
    let mut hinv = identity(n);
    let mut fresh = true;
    let (mut converged, mut exhausted) = (false, false);
    loop {
        if n == 0 || norm(&g) < settings.gradient_norm_tolerance {
            converged = true;
            break;
        }
        if evals >= settings.max_evaluations {
            exhausted = true;
            break;
        }
        let mut p: Vec<f64> = (0..n).map(|i| -dot(&hinv[i], &g)).collect();
        if dot(&p, &g) >= 0.0 {
            hinv = identity(n);
            fresh = true;
            p = g.iter().map(|v| -v).collect();
        }
        let a0 = if fresh { (1.0 / norm(&p)).min(1.0) } else { 1.0 };
        let found = Search {
            f: &mut f,
            x: &x,
            p: &p,
            f0: fx,
            d0: dot(&g, &p),
            c1: settings.c1,
            c2: settings.c2,
            evals: &mut evals,
            budget: settings.max_evaluations,
        }
        .run(a0);
        let pt = match found {
            Some(pt) if pt.f < fx || (pt.f <= fx && norm(&pt.g) < norm(&g)) => pt,
            _ => {
                if evals >= settings.max_evaluations {
                    exhausted = true;
                    break;
                }
                if !fresh {
                    // stale curvature information; retry along steepest descent
                    hinv = identity(n);
                    fresh = true;
                    continue;
                }
                // no progress along steepest descent: numerically stationary
                converged = norm(&g) < 1e3 * settings.gradient_norm_tolerance;
                break;
            }
        };
        iterations += 1;
        let s: Vec<f64> = p.iter().map(|v| pt.a * v).collect();
        let y: Vec<f64> = pt.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        x.iter_mut().zip(&s).for_each(|(xi, si)| *xi += si);
        fx = pt.f;
        g = pt.g;
        if s.iter().fold(0.0f64, |m, v| m.max(v.abs())) < settings.parameter_tolerance {
            converged = true;
            break;
        }
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if fresh {
                let scale = sy / dot(&y, &y);
                hinv = identity(n);
                hinv.iter_mut().enumerate().for_each(|(i, r)| r[i] = scale);
                fresh = false;
            }
            bfgs_update(&mut hinv, &s, &y, sy);
        }
    }
    Minimum {
        x,
        value: fx,
        gradient: g,
        evaluations: evals,
        iterations,
        converged,
        budget_exhausted: exhausted,
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}
