//! Deterministic local minimizers shared by the tomography and fitting code.
//!
//! Two methods are available behind [`minimize`]:
//!
//! * [`Method::Bfgs`] (default): quasi-Newton with central finite-difference
//!   gradients (step `1e-6 · max(|x_i|, 1)`), Armijo backtracking and the
//!   Shanno-Phua initial Hessian scaling.
//! * [`Method::NelderMead`]: the classic reflection/expansion/contraction/shrink
//!   simplex with one restart from the converged vertex.
//!
//! Box bounds are handled by projecting every trial point onto the box.
//! Only strictly improving steps are accepted, so the best-so-far trace in
//! [`Minimum::history`] is non-increasing.

use crate::error::{Error, Result};

/// Problem description. `bounds`, when given, has one `(lo, hi)` pair per coordinate.
pub struct ObjectiveSpec<F>
where
    F: Fn(&[f64]) -> f64,
{
    pub dimension: usize,
    pub evaluate: F,
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl<F> ObjectiveSpec<F>
where
    F: Fn(&[f64]) -> f64,
{
    pub fn new(dimension: usize, evaluate: F) -> Self {
        Self {
            dimension,
            evaluate,
            bounds: None,
        }
    }

    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.bounds = Some(bounds);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Bfgs,
    /// `initial_step` is the simplex edge, relative to `max(|x_i|, 1)`.
    NelderMead { initial_step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub max_evals: usize,
    /// Relative objective-change tolerance (BFGS) or absolute simplex spread (Nelder-Mead).
    pub f_tol: f64,
    /// Step-size tolerance relative to `1 + ‖x‖∞` (BFGS) or absolute simplex size (Nelder-Mead).
    pub x_tol: f64,
    pub method: Method,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_evals: 200_000,
            f_tol: 1e-10,
            x_tol: 1e-9,
            method: Method::Bfgs,
        }
    }
}

impl MinimizeOptions {
    pub fn nelder_mead(initial_step: f64) -> Self {
        Self {
            method: Method::NelderMead { initial_step },
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    MaxEvals,
    /// No further decrease could be found (numerical floor of the objective).
    Stalled,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub status: Status,
    pub evals: usize,
    pub iterations: usize,
    /// Best objective value after each iteration.
    pub history: Vec<f64>,
}

impl Minimum {
    /// Turns `MaxEvals` into an [`Error::Optimizer`] carrying the best iterate.
    pub fn require_converged(self) -> Result<Self> {
        match self.status {
            Status::MaxEvals => Err(Error::Optimizer {
                reason: format!("evaluation budget exhausted after {} evaluations", self.evals),
                best_value: self.f,
                best_point: self.x,
            }),
            _ => Ok(self),
        }
    }
}

pub fn minimize<F>(spec: &ObjectiveSpec<F>, start: &[f64], opts: &MinimizeOptions) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    if start.len() != spec.dimension || spec.dimension == 0 {
        return Err(Error::Domain(format!(
            "start has {} coordinates, objective expects {}",
            start.len(),
            spec.dimension
        )));
    }
    if !(opts.max_evals > 0 && opts.f_tol > 0.0 && opts.x_tol > 0.0) {
        return Err(Error::Domain("optimizer options must be positive".into()));
    }
    if let Some(b) = &spec.bounds {
        if b.len() != spec.dimension {
            return Err(Error::Domain("bounds length does not match dimension".into()));
        }
        for (i, (&x, &(lo, hi))) in start.iter().zip(b).enumerate() {
            if !(lo <= x && x <= hi) {
                return Err(Error::Domain(format!("start coordinate {i} = {x} outside [{lo}, {hi}]")));
            }
        }
    }
    let mut counted = Counted {
        spec,
        evals: 0,
    };
    let f0 = counted.eval(start);
    if !f0.is_finite() {
        return Err(Error::Domain(format!("objective is not finite at the start point ({f0})")));
    }
    match opts.method {
        Method::Bfgs => Ok(bfgs(&mut counted, start.to_vec(), f0, opts)),
        Method::NelderMead { initial_step } => {
            let first = nelder_mead(&mut counted, start.to_vec(), f0, initial_step, opts);
            if first.status != Status::Converged {
                return Ok(first);
            }
            // restart from the best vertex to escape a collapsed simplex
            let again = nelder_mead(&mut counted, first.x.clone(), first.f, initial_step, opts);
            let mut history = first.history;
            history.extend(again.history.iter().map(|&v| v.min(first.f)));
            let (x, f) = if again.f < first.f { (again.x, again.f) } else { (first.x, first.f) };
            Ok(Minimum {
                x,
                f,
                status: again.status,
                evals: counted.evals,
                iterations: first.iterations + again.iterations,
                history,
            })
        }
    }
}

struct Counted<'a, F: Fn(&[f64]) -> f64> {
    spec: &'a ObjectiveSpec<F>,
    evals: usize,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.spec.evaluate)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn project(&self, x: &mut [f64]) {
        if let Some(b) = &self.spec.bounds {
            for (v, &(lo, hi)) in x.iter_mut().zip(b) {
                *v = v.clamp(lo, hi);
            }
        }
    }

    fn gradient(&mut self, x: &[f64], fx: f64) -> Vec<f64> {
        let n = x.len();
        let mut g = vec![0.0; n];
        let mut probe = x.to_vec();
        for i in 0..n {
            let h = 1e-6 * x[i].abs().max(1.0);
            let (mut lo, mut hi) = (x[i] - h, x[i] + h);
            if let Some(b) = &self.spec.bounds {
                lo = lo.max(b[i].0);
                hi = hi.min(b[i].1);
            }
            let (f_lo, f_hi);
            probe[i] = hi;
            f_hi = if hi > x[i] { self.eval(&probe) } else { fx };
            probe[i] = lo;
            f_lo = if lo < x[i] { self.eval(&probe) } else { fx };
            probe[i] = x[i];
            let span = hi - lo;
            g[i] = if span > 0.0 && f_hi.is_finite() && f_lo.is_finite() {
                (f_hi - f_lo) / span
            } else {
                0.0
            };
        }
        g
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn bfgs<F: Fn(&[f64]) -> f64>(
    obj: &mut Counted<'_, F>,
    mut x: Vec<f64>,
    mut fx: f64,
    opts: &MinimizeOptions,
) -> Minimum {
    let n = x.len();
    let mut h = vec![0.0; n * n];
    let reset = |h: &mut Vec<f64>| {
        h.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            h[i * n + i] = 1.0;
        }
    };
    reset(&mut h);
    let mut fresh = true;
    let mut g = obj.gradient(&x, fx);
    let mut history = vec![fx];
    let mut iterations = 0;
    let status = loop {
        if obj.evals >= opts.max_evals {
            break Status::MaxEvals;
        }
        if inf_norm(&g) == 0.0 {
            break Status::Converged;
        }
        iterations += 1;
        let mut d: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            reset(&mut h);
            fresh = true;
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut alpha = if fresh { (1.0 / inf_norm(&d)).min(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..80 {
            let mut trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            obj.project(&mut trial);
            let ft = obj.eval(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * alpha * slope && ft < fx {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
            if obj.evals >= opts.max_evals {
                break;
            }
        }
        let Some((x_new, f_new)) = accepted else {
            if !fresh {
                reset(&mut h);
                fresh = true;
                continue;
            }
            break Status::Stalled;
        };
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let g_new = obj.gradient(&x_new, f_new);
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let df = fx - f_new;
        let f_scale = fx.abs() + f_new.abs();
        let step_small = inf_norm(&s) <= opts.x_tol * (1.0 + inf_norm(&x_new));
        x = x_new;
        fx = f_new;
        g = g_new;
        history.push(fx);
        if df <= opts.f_tol * 0.5 * f_scale || step_small {
            break Status::Converged;
        }
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh {
                let scale = sy / dot(&y, &y);
                reset(&mut h);
                h.iter_mut().for_each(|v| *v *= scale);
                fresh = false;
            }
            let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += rho * rho * (sy + yhy) * s[i] * s[j]
                        - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
    };
    Minimum {
        x,
        f: fx,
        status,
        evals: obj.evals,
        iterations,
        history,
    }
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(
    obj: &mut Counted<'_, F>,
    x0: Vec<f64>,
    f0: f64,
    initial_step: f64,
    opts: &MinimizeOptions,
) -> Minimum {
    let n = x0.len();
    let mut simplex = vec![(x0.clone(), f0)];
    for i in 0..n {
        let mut v = x0.clone();
        let step = initial_step * x0[i].abs().max(1.0);
        v[i] += step;
        obj.project(&mut v);
        if v[i] == x0[i] {
            v[i] -= step;
            obj.project(&mut v);
        }
        let fv = obj.eval(&v);
        simplex.push((v, fv));
    }
    let mut history = Vec::new();
    let mut iterations = 0;
    let status = loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        history.push(simplex[0].1);
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(&simplex[0].0).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && size <= opts.x_tol {
            break Status::Converged;
        }
        if obj.evals >= opts.max_evals {
            break Status::MaxEvals;
        }
        if size == 0.0 {
            break Status::Stalled;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64, obj: &Counted<'_, F>| {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect();
            obj.project(&mut p);
            p
        };
        let xr = along(-1.0, obj);
        let fr = obj.eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0, obj);
            let fe = obj.eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let p = along(-0.5, obj);
            let f = obj.eval(&p);
            (p, f)
        } else {
            let p = along(0.5, obj);
            let f = obj.eval(&p);
            (p, f)
        };
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for k in 1..=n {
            let mut p: Vec<f64> = best
                .iter()
                .zip(&simplex[k].0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            obj.project(&mut p);
            let f = obj.eval(&p);
            simplex[k] = (p, f);
        }
    };
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Minimum {
        x,
        f,
        status,
        evals: obj.evals,
        iterations,
        history,
    }
}

/// Golden-section search on `[lo, hi]` until the bracket is narrower than `tol`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(a, fa), (b, fb), (mid, fm)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

/// Bounded scalar minimization: uniform scan with `grid` intervals, then golden section
/// inside the two intervals around the best scan point.
pub fn bounded_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> (f64, f64) {
    let grid = grid.max(2);
    let step = (hi - lo) / grid as f64;
    let (mut best_k, mut best_f) = (0, f64::INFINITY);
    for k in 0..=grid {
        let v = f(lo + step * k as f64);
        if v < best_f {
            best_f = v;
            best_k = k;
        }
    }
    let a = lo + step * best_k.saturating_sub(1) as f64;
    let b = (lo + step * (best_k + 1) as f64).min(hi);
    let (x, fx) = golden_section(&f, a, b, tol);
    if fx <= best_f {
        (x, fx)
    } else {
        (lo + step * best_k as f64, best_f)
    }
}
