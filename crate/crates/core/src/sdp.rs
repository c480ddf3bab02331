//! Numeric subproblem: choose a full-rank principal submatrix of a pencil and
//! maximize the smallest eigenvalue over the pencil parameters.
//!
//! The maximization runs a log-barrier path-following method on
//! `max λ  s.t.  W_Ω(t) − λI ≻ 0`, with damped Newton centering. As the
//! barrier weight vanishes the iterates approach the analytic center of the
//! optimal face, which is what makes rounding on a boundary face work.

use log::debug;

use crate::arith::Field;
use crate::gram::GramPencil;
use crate::linalg;
use crate::{Error, Result};

pub type DMatrix = Vec<Vec<f64>>;

/// Eigenvalues in ascending order with matching unit eigenvectors
/// (`vectors[k]` belongs to `values[k]`).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
pub fn sym_eigen(m: &DMatrix) -> Result<Eigen> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v: DMatrix = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off.sqrt() <= 1e-15 * scale * n as f64 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    if !converged && n > 1 {
        return Err(Error::Numerical("Jacobi iteration did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    Ok(Eigen {
        values: order.iter().map(|&i| a[i][i]).collect(),
        vectors: order.iter().map(|&i| v.iter().map(|r| r[i]).collect()).collect(),
    })
}

/// Smallest eigenvalue; `+∞` for an empty matrix.
pub fn min_eigenvalue(m: &DMatrix) -> Result<f64> {
    Ok(sym_eigen(m)?.values.first().copied().unwrap_or(f64::INFINITY))
}

/// Indices of a principal submatrix of size `s` that is nonsingular at a
/// random specialization, taken from the pivot columns of that
/// specialization. For a symmetric matrix of rank `s`, any `s` independent
/// columns give a nonsingular principal submatrix.
pub fn full_rank_principal_submatrix<F: Field>(p: &GramPencil<F>, s: usize, draws: usize, seed: u64) -> Result<Vec<usize>> {
    if s == p.size() {
        return Ok((0..s).collect());
    }
    for d in 0..draws.max(1) {
        let t = p.random_point(seed.wrapping_add(d as u64));
        let w = p.eval(&t)?;
        let cols = linalg::pivot_columns(p.field(), &w);
        if cols.len() < s {
            continue;
        }
        let omega: Vec<usize> = cols[..s].to_vec();
        let sub: linalg::Matrix<F::Elem> =
            omega.iter().map(|&i| omega.iter().map(|&j| w[i][j].clone()).collect()).collect();
        if linalg::rank_fraction_free(p.field(), &sub) == s {
            return Ok(omega);
        }
    }
    Err(Error::Numerical(format!("no principal submatrix of rank {s} found in {draws} draws")))
}

/// Outcome class of the eigenvalue maximization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    PositiveDefinite,
    Boundary,
    InfeasibleLike,
}

impl std::fmt::Display for SdpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SdpStatus::PositiveDefinite => "positive-definite",
            SdpStatus::Boundary => "boundary",
            SdpStatus::InfeasibleLike => "infeasible-like",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SdpConfig {
    /// Smallest eigenvalue above which the result counts as positive definite.
    pub eig_tol: f64,
    /// Smallest eigenvalue below `-boundary_tol` counts as infeasible-like.
    pub boundary_tol: f64,
    /// Total Newton step budget.
    pub max_iters: usize,
    /// Stop once the barrier duality-gap bound falls below this, relative to
    /// the data scale.
    pub gap_tol: f64,
    /// Barrier weight growth per outer step.
    pub growth: f64,
    /// Seeds the random specialization used when picking submatrices.
    pub seed: u64,
}

impl Default for SdpConfig {
    fn default() -> Self {
        SdpConfig { eig_tol: 1e-9, boundary_tol: 1e-6, max_iters: 2000, gap_tol: 1e-12, growth: 8.0, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SdpResult {
    pub params: Vec<f64>,
    pub min_eigenvalue: f64,
    pub status: SdpStatus,
    /// Best smallest eigenvalue after each outer step.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximizes `λ_min(W_Ω(t))` over the pencil parameters.
pub fn max_min_eigenvalue<F: Field>(p: &GramPencil<F>, omega: &[usize], cfg: &SdpConfig) -> Result<SdpResult> {
    if cfg.eig_tol.is_nan() || cfg.eig_tol <= 0.0 {
        return Err(Error::InvalidInput("eigenvalue tolerance must be positive".into()));
    }
    let sub = p.restrict(omega);
    let (c, dirs) = sub.to_f64()?;
    let solver = Barrier::new(c, dirs);
    let out = solver.solve(cfg)?;
    debug!("sdp: λ_min {:.3e} after {} Newton steps ({})", out.min_eigenvalue, out.iterations, out.status);
    Ok(out)
}

/// `W(t) = C + Σ tᵢ Dᵢ` evaluated in floating point.
pub fn eval_f64(c: &DMatrix, dirs: &[DMatrix], t: &[f64]) -> DMatrix {
    let mut w = c.clone();
    for (d, &ti) in dirs.iter().zip(t) {
        if ti == 0.0 {
            continue;
        }
        for (wr, dr) in w.iter_mut().zip(d) {
            for (x, y) in wr.iter_mut().zip(dr) {
                *x += ti * y;
            }
        }
    }
    w
}

struct Barrier {
    c: DMatrix,
    dirs: Vec<DMatrix>,
    scale: f64,
}

impl Barrier {
    fn new(c: DMatrix, dirs: Vec<DMatrix>) -> Self {
        let scale = c.iter().chain(dirs.iter().flatten()).flatten().fold(1.0f64, |s, x| s.max(x.abs()));
        Barrier { c, dirs, scale }
    }

    fn n(&self) -> usize {
        self.c.len()
    }

    fn k(&self) -> usize {
        self.dirs.len()
    }

    fn slack(&self, x: &[f64]) -> DMatrix {
        let k = self.k();
        let mut s = eval_f64(&self.c, &self.dirs, &x[..k]);
        for (i, row) in s.iter_mut().enumerate() {
            row[i] -= x[k];
        }
        s
    }

    fn status(&self, lmin: f64, cfg: &SdpConfig) -> SdpStatus {
        if lmin > cfg.eig_tol {
            SdpStatus::PositiveDefinite
        } else if lmin >= -cfg.boundary_tol {
            SdpStatus::Boundary
        } else {
            SdpStatus::InfeasibleLike
        }
    }

    fn solve(&self, cfg: &SdpConfig) -> Result<SdpResult> {
        let n = self.n();
        let k = self.k();
        if n == 0 {
            return Ok(SdpResult {
                params: vec![0.0; k],
                min_eigenvalue: f64::INFINITY,
                status: SdpStatus::PositiveDefinite,
                history: vec![],
                iterations: 0,
                converged: true,
            });
        }
        let lmin0 = min_eigenvalue(&self.c)?;
        if k == 0 {
            return Ok(SdpResult {
                params: vec![],
                min_eigenvalue: lmin0,
                status: self.status(lmin0, cfg),
                history: vec![lmin0],
                iterations: 0,
                converged: true,
            });
        }
        let mut x = vec![0.0; k + 1];
        x[k] = lmin0 - 1.0;
        let radius = 1e4 * self.scale * (1.0 + lmin0.abs() / self.scale);
        let objective = |x: &[f64], tau: f64| -> Option<f64> {
            let q = radius * radius - x.iter().map(|v| v * v).sum::<f64>();
            if q <= 0.0 {
                return None;
            }
            let l = cholesky(&self.slack(x))?;
            let logdet: f64 = (0..n).map(|i| 2.0 * l[i][i].ln()).sum();
            Some(-tau * x[k] - logdet - q.ln())
        };

        let mut tau = (n as f64 + 1.0) / self.scale;
        let mut best_t = vec![0.0; k];
        let mut best = lmin0;
        let mut history = vec![best];
        let mut iterations = 0;
        let mut converged = false;
        'outer: loop {
            // Centering by damped Newton.
            loop {
                if iterations >= cfg.max_iters {
                    break 'outer;
                }
                let Some((g, h)) = self.derivatives(&x, tau, radius) else { break 'outer };
                let Some(step) = solve_spd(&h, &g.iter().map(|v| -v).collect::<Vec<_>>()) else { break 'outer };
                let decrement2: f64 = -g.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
                iterations += 1;
                if decrement2 < 1e-14 {
                    break;
                }
                let f0 = objective(&x, tau).expect("iterate stays interior");
                let mut alpha = 1.0;
                let mut moved = false;
                while alpha > 1e-12 {
                    let cand: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + alpha * b).collect();
                    if let Some(f1) = objective(&cand, tau) {
                        if f1 <= f0 - 0.25 * alpha * decrement2 {
                            x = cand;
                            moved = true;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                if !moved || decrement2 < 1e-9 {
                    break;
                }
            }
            let t = &x[..k];
            let lmin = min_eigenvalue(&eval_f64(&self.c, &self.dirs, t))?;
            if lmin >= best {
                best = lmin;
                best_t = t.to_vec();
            }
            history.push(best);
            if (n as f64 + 1.0) / tau < cfg.gap_tol * self.scale {
                converged = true;
                break;
            }
            tau *= cfg.growth;
        }
        Ok(SdpResult {
            params: best_t,
            min_eigenvalue: best,
            status: self.status(best, cfg),
            history,
            iterations,
            converged,
        })
    }

    /// Gradient and Hessian of `−τλ − log det S − log(R² − |x|²)`.
    fn derivatives(&self, x: &[f64], tau: f64, radius: f64) -> Option<(Vec<f64>, DMatrix)> {
        let n = self.n();
        let k = self.k();
        let sinv = spd_inverse(&self.slack(x))?;
        // Yⱼ = S⁻¹ Eⱼ with Eⱼ = Dⱼ for parameters and −I for λ.
        let mut ys: Vec<DMatrix> = self.dirs.iter().map(|d| matmul(&sinv, d)).collect();
        ys.push(sinv.iter().map(|r| r.iter().map(|v| -v).collect()).collect());
        let m = k + 1;
        let mut g = vec![0.0; m];
        let mut h = vec![vec![0.0; m]; m];
        for j in 0..m {
            g[j] = -(0..n).map(|i| ys[j][i][i]).sum::<f64>();
            for l in j..m {
                let mut s = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        s += ys[j][a][b] * ys[l][b][a];
                    }
                }
                h[j][l] = s;
                h[l][j] = s;
            }
        }
        g[k] -= tau;
        let q = radius * radius - x.iter().map(|v| v * v).sum::<f64>();
        for j in 0..m {
            g[j] += 2.0 * x[j] / q;
            h[j][j] += 2.0 / q;
            for l in 0..m {
                h[j][l] += 4.0 * x[j] * x[l] / (q * q);
            }
        }
        Some((g, h))
    }
}

fn matmul(a: &DMatrix, b: &DMatrix) -> DMatrix {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0.0; p]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate() {
            let x = a[i][l];
            if x == 0.0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += x * bl[j];
            }
        }
    }
    out
}

/// Lower Cholesky factor, `None` unless positive definite.
fn cholesky(a: &DMatrix) -> Option<DMatrix> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|p| l[i][p] * l[j][p]).sum::<f64>();
            if i == j {
                if s.is_nan() || s <= 0.0 {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(l: &DMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = b.to_vec();
    for i in 0..n {
        for p in 0..i {
            y[i] -= l[i][p] * y[p];
        }
        y[i] /= l[i][i];
    }
    for i in (0..n).rev() {
        for p in i + 1..n {
            y[i] -= l[p][i] * y[p];
        }
        y[i] /= l[i][i];
    }
    y
}

fn solve_spd(a: &DMatrix, b: &[f64]) -> Option<Vec<f64>> {
    Some(cholesky_solve(&cholesky(a)?, b))
}

fn spd_inverse(a: &DMatrix) -> Option<DMatrix> {
    let l = cholesky(a)?;
    let n = a.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            cholesky_solve(&l, &e)
        })
        .collect();
    Some((0..n).map(|i| (0..n).map(|j| 0.5 * (cols[j][i] + cols[i][j])).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;
    use crate::gram::build_pencil;

    #[test]
    fn jacobi_basics() {
        let e = sym_eigen(&vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let (c, s) = (0.6f64, 0.8f64);
        // R diag(2, -1) Rᵀ
        let m = vec![vec![2.0 * c * c - s * s, 2.0 * c * s + c * s], vec![2.0 * c * s + c * s, 2.0 * s * s - c * c]];
        let e = sym_eigen(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-9 && (e.values[1] - 2.0).abs() < 1e-9);
        let v = &e.vectors[0];
        let mv: Vec<f64> = m.iter().map(|r| r[0] * v[0] + r[1] * v[1]).collect();
        assert!((mv[0] + v[0]).abs() < 1e-9 && (mv[1] + v[1]).abs() < 1e-9);
    }

    #[test]
    fn binary_quartic_is_strictly_feasible() {
        let f = parse_poly("10*x^4+2*x^3*y+27*x^2*y^2-24*x*y^3+5*y^4").unwrap();
        let p = build_pencil(&f).unwrap();
        let omega = full_rank_principal_submatrix(&p, 3, 3, 0).unwrap();
        assert_eq!(omega, vec![0, 1, 2]);
        let r = max_min_eigenvalue(&p, &omega, &SdpConfig::default()).unwrap();
        assert_eq!(r.status, SdpStatus::PositiveDefinite);
        assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
        let (c, d) = p.to_f64().unwrap();
        let direct = min_eigenvalue(&eval_f64(&c, &d, &r.params)).unwrap();
        assert!((direct - r.min_eigenvalue).abs() < 1e-8);
    }

    #[test]
    fn no_parameters_reports_direct_eigenvalue() {
        let f = parse_poly("x^2 - y^2").unwrap();
        let p = build_pencil(&f).unwrap();
        let r = max_min_eigenvalue(&p, &[0, 1], &SdpConfig::default()).unwrap();
        assert_eq!(r.status, SdpStatus::InfeasibleLike);
        assert!((r.min_eigenvalue + 1.0).abs() < 1e-12);
    }
}
