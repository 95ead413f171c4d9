//! Per-round scalar characteristics of a static kernel: hitting time, mixing
//! time, second eigenvalue, substochastic spectral radii, `ℓ2(π)` geometry
//! and the round-coupling ratio `r_i`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kernel::TransitionKernel;

/// Linear-solve tolerance shared by the engines.
pub const SOLVE_TOL: f64 = 1e-10;
/// Eigen tolerance for iterative routines.
pub const EIGEN_TOL: f64 = 1e-10;
/// Slack allowed when checking proved inequalities numerically.
pub const INVARIANT_SLACK: f64 = 1e-9;

const POWER_ITER_CAP: u64 = 1_000_000;

/// Expected times to hit each target from each start.
#[derive(Debug, Clone)]
pub struct HittingTimes {
    /// `expected[u][v] = E[τ_v | X_0 = u]`; zero on the diagonal.
    pub expected: Vec<Vec<f64>>,
    /// Worst pair: `max_{u,v} expected[u][v]`.
    pub t_hit: f64,
}

/// Hitting times by solving `(I - P_{v̄}) h = 1` per target `v`.
pub fn hitting_time(kernel: &TransitionKernel) -> Result<HittingTimes> {
    let n = kernel.order() as usize;
    let mut expected = vec![vec![0.0; n]; n];
    let mut t_hit: f64 = 0.0;
    for target in 0..n {
        if n == 1 {
            break;
        }
        let m = n - 1;
        // index map skipping the target
        let keep: Vec<usize> = (0..n).filter(|&u| u != target).collect();
        let mut a = DMatrix::zeros(m, m);
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate() {
                let p = kernel.entry(u as u32, v as u32);
                a[(i, j)] = if i == j { 1.0 - p } else { -p };
            }
        }
        let rhs = DVector::from_element(m, 1.0);
        let lu = a.lu();
        let h = lu.solve(&rhs).ok_or_else(|| {
            Error::Structural(format!(
                "hitting-time system singular for target {target}; kernel reducible?"
            ))
        })?;
        for (i, &u) in keep.iter().enumerate() {
            let val = h[i];
            if !val.is_finite() || val < 0.0 {
                return Err(Error::Structural(format!(
                    "hitting time from {u} to {target} is {val}"
                )));
            }
            expected[u][target] = val;
            t_hit = t_hit.max(val);
        }
    }
    Ok(HittingTimes { expected, t_hit })
}

/// Result of a mixing-time search capped at `t_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingOutcome {
    Mixed(u64),
    /// Total-variation distance still above 1/4 at the cap.
    Exceeded { t_cap: u64 },
}

impl MixingOutcome {
    pub fn steps(&self) -> Option<u64> {
        match self {
            MixingOutcome::Mixed(t) => Some(*t),
            MixingOutcome::Exceeded { .. } => None,
        }
    }
}

fn tv_from_stationary(power: &DMatrix<f64>, pi: &[f64]) -> f64 {
    let n = pi.len();
    let mut worst: f64 = 0.0;
    for u in 0..n {
        let mut d = 0.0;
        for v in 0..n {
            d += (power[(u, v)] - pi[v]).abs();
        }
        worst = worst.max(0.5 * d);
    }
    worst
}

/// `P^t` assembled from the cached squarings `squares[j] = P^(2^j)`.
fn power_from_squares(squares: &[DMatrix<f64>], t: u64) -> DMatrix<f64> {
    let n = squares[0].nrows();
    let mut acc: Option<DMatrix<f64>> = None;
    for (j, sq) in squares.iter().enumerate() {
        if t & (1 << j) != 0 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(m) => m * sq,
            });
        }
    }
    acc.unwrap_or_else(|| DMatrix::identity(n, n))
}

/// Smallest `t > 0` with `(1/2)·max_u Σ_v |P^t(u,v) − π(v)| ≤ 1/4`.
///
/// The worst-start total-variation distance is nonincreasing in `t`, so the
/// search doubles `t` until the threshold holds and then bisects.
pub fn mixing_time(kernel: &TransitionKernel, t_cap: u64) -> MixingOutcome {
    let pi = kernel.stationary();
    let mut squares = vec![kernel.matrix().clone()];
    if tv_from_stationary(&squares[0], pi) <= 0.25 {
        return MixingOutcome::Mixed(1);
    }
    // exponential phase
    let mut hi: u64 = 1;
    loop {
        if hi >= t_cap {
            return MixingOutcome::Exceeded { t_cap };
        }
        let last = squares.last().unwrap();
        squares.push(last * last);
        hi *= 2;
        let tv = tv_from_stationary(squares.last().unwrap(), pi);
        if tv <= 0.25 {
            break;
        }
    }
    // invariant: tv(lo) > 1/4, tv(hi) <= 1/4
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let pm = power_from_squares(&squares, mid);
        if tv_from_stationary(&pm, pi) <= 0.25 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi > t_cap {
        MixingOutcome::Exceeded { t_cap }
    } else {
        MixingOutcome::Mixed(hi)
    }
}

/// `D^{1/2} P D^{-1/2}` for `D = diag(π)`; symmetric when `P` is reversible.
fn symmetrize(kernel: &TransitionKernel) -> DMatrix<f64> {
    let n = kernel.order() as usize;
    let pi = kernel.stationary();
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            let p = kernel.entry(u as u32, v as u32);
            if p != 0.0 {
                a[(u, v)] = p * (pi[u] / pi[v]).sqrt();
            }
        }
    }
    a
}

/// Second-largest eigenvalue in absolute value of a reversible kernel,
/// computed on the π-symmetrized form.
pub fn lambda2(kernel: &TransitionKernel) -> Result<f64> {
    if !kernel.flags().reversible {
        return Err(Error::Structural(
            "lambda2 requires a reversible kernel".into(),
        ));
    }
    let n = kernel.order() as usize;
    if n == 1 {
        return Ok(0.0);
    }
    let a = symmetrize(kernel);
    let sym = nalgebra::SymmetricEigen::new(a);
    let mut eigs: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    eigs.sort_by(|x, y| y.abs().partial_cmp(&x.abs()).unwrap());
    Ok(eigs[1].abs())
}

/// The kernel with one vertex's row and column zeroed: its powers give
/// joint survive-and-be-at probabilities.
#[derive(Debug, Clone)]
pub struct SubstochasticKernel<'a> {
    base: &'a TransitionKernel,
    removed: u32,
}

impl<'a> SubstochasticKernel<'a> {
    pub fn new(base: &'a TransitionKernel, removed: u32) -> Result<Self> {
        if removed >= base.order() {
            return Err(Error::range("removed vertex", removed, format!("< {}", base.order())));
        }
        Ok(SubstochasticKernel { base, removed })
    }

    pub fn removed(&self) -> u32 {
        self.removed
    }

    pub fn entry(&self, u: u32, v: u32) -> f64 {
        if u == self.removed || v == self.removed {
            0.0
        } else {
            self.base.entry(u, v)
        }
    }

    /// Dense matrix form, order matching the base kernel.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut m = self.base.matrix().clone();
        let w = self.removed as usize;
        for i in 0..m.nrows() {
            m[(w, i)] = 0.0;
            m[(i, w)] = 0.0;
        }
        m
    }

    /// One substochastic step `out = x · P_{w̄}`. Requires `x[w] = 0`, which
    /// every propagation in this crate maintains.
    pub fn step(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x[self.removed as usize], 0.0);
        self.base.step_distribution(x, out);
        out[self.removed as usize] = 0.0;
    }

    /// Largest eigenvalue via power iteration on the symmetrized form,
    /// shifted to `(A + I)/2` so the iteration cannot oscillate between the
    /// extreme eigenvalues.
    pub fn largest_eigenvalue(&self) -> Result<f64> {
        let n = self.base.order() as usize;
        if n == 1 {
            return Ok(0.0);
        }
        let pi = self.base.stationary();
        let w = self.removed as usize;
        // rows of the symmetrized substochastic matrix, skipping w
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (u, row) in rows.iter_mut().enumerate() {
            if u == w {
                continue;
            }
            for &(v, p) in self.base.sparse_row(u as u32) {
                if v as usize != w {
                    row.push((v, p * (pi[u] / pi[v as usize]).sqrt()));
                }
            }
        }
        let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut x = vec![1.0 / ((n - 1) as f64).sqrt(); n];
        x[w] = 0.0;
        let mut theta_prev = f64::NAN;
        let mut y = vec![0.0; n];
        for iter in 0..POWER_ITER_CAP {
            // y = (A + I)/2 · x
            for (u, row) in rows.iter().enumerate() {
                let mut acc = 0.0;
                for &(v, a) in row {
                    acc += a * x[v as usize];
                }
                y[u] = 0.5 * (acc + x[u]);
            }
            let theta = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
            let ny = norm(&y);
            if ny == 0.0 {
                return Ok(0.0);
            }
            for (a, b) in x.iter_mut().zip(&y) {
                *a = b / ny;
            }
            if iter > 4 && (theta - theta_prev).abs() <= 1e-14 * theta.abs().max(1.0) {
                return Ok((2.0 * theta - 1.0).max(-1.0).min(1.0));
            }
            theta_prev = theta;
        }
        Err(Error::Numerical {
            what: "substochastic power iteration",
            iterations: POWER_ITER_CAP,
            residual: (2.0 * theta_prev - 1.0).abs(),
        })
    }
}

/// `λ(P_{w̄})` for a reversible kernel (the spec's survival radius).
pub fn survival_radius(kernel: &TransitionKernel, w: u32) -> Result<f64> {
    if !kernel.flags().reversible {
        return Err(Error::Structural(
            "survival radius requires a reversible kernel".into(),
        ));
    }
    SubstochasticKernel::new(kernel, w)?.largest_eigenvalue()
}

/// `r_i = max_v π^{(i-1)}(v) / π^{(i)}(v)` over the shared (old) vertices.
pub fn pi_ratio(prev: &TransitionKernel, next: &TransitionKernel) -> Result<f64> {
    if prev.order() >= next.order() {
        return Err(Error::range(
            "kernel orders",
            format!("{} -> {}", prev.order(), next.order()),
            "strictly growing",
        ));
    }
    let mut r: f64 = 0.0;
    for v in 0..prev.order() as usize {
        let old = prev.stationary()[v];
        let new = next.stationary()[v];
        if new <= 0.0 {
            return Err(Error::Structural(format!(
                "zero stationary mass at shared vertex {v}"
            )));
        }
        r = r.max(old / new);
    }
    Ok(r)
}

/// `⟨f, g⟩_π = Σ_v π(v) f(v) g(v)`.
pub fn pi_inner(f: &[f64], g: &[f64], pi: &[f64]) -> f64 {
    f.iter()
        .zip(g)
        .zip(pi)
        .map(|((a, b), w)| w * a * b)
        .sum()
}

/// `‖ξ/π − 1‖²_{2,π} = Σ_v π(v) (ξ(v)/π(v) − 1)²` for probability vectors.
pub fn pi_norm_sq_deviation(xi: &[f64], pi: &[f64]) -> Result<f64> {
    if xi.len() != pi.len() {
        return Err(Error::range("vector length", xi.len(), pi.len()));
    }
    let mut total = 0.0;
    for (x, w) in xi.iter().zip(pi) {
        if *w <= 0.0 {
            return Err(Error::config("pi", "stationary vector must be strictly positive"));
        }
        let d = x / w - 1.0;
        total += w * d * d;
    }
    Ok(total)
}

/// Scalar summary of one static kernel.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub order: u32,
    pub t_hit: f64,
    pub t_mix: MixingOutcome,
    pub lambda2: f64,
    /// `λ(P_{w̄})` per vertex `w`.
    pub survival_radius: Vec<f64>,
    pub pi_min: f64,
}

impl AnalysisReport {
    pub fn compute(kernel: &TransitionKernel, t_mix_cap: u64) -> Result<Self> {
        let ht = hitting_time(kernel)?;
        let t_mix = mixing_time(kernel, t_mix_cap);
        let lambda2 = lambda2(kernel)?;
        let mut radii = Vec::with_capacity(kernel.order() as usize);
        for w in 0..kernel.order() {
            radii.push(survival_radius(kernel, w)?);
        }
        Ok(AnalysisReport {
            order: kernel.order(),
            t_hit: ht.t_hit,
            t_mix,
            lambda2,
            survival_radius: radii,
            pi_min: kernel.min_stationary(),
        })
    }

    pub fn max_survival_radius(&self) -> f64 {
        self.survival_radius
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::kernel::TransitionKernel;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hitting_uniform_complete_is_geometric() {
        // success probability 1/5 each step, so E = 5 for every pair
        let k = TransitionKernel::uniform_complete(5).unwrap();
        let ht = hitting_time(&k).unwrap();
        assert!(close(ht.t_hit, 5.0, 1e-9));
        for u in 0..5 {
            for v in 0..5 {
                let want = if u == v { 0.0 } else { 5.0 };
                assert!(close(ht.expected[u][v], want, 1e-9));
            }
        }
    }

    #[test]
    fn hitting_lazy_path_four() {
        // twice the non-lazy end-to-end value (n-1)^2
        let g = Family::Path.snapshot(4).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let ht = hitting_time(&k).unwrap();
        assert!(close(ht.t_hit, 18.0, 1e-8), "{}", ht.t_hit);
        assert!(close(ht.expected[0][3], 18.0, 1e-8));
    }

    #[test]
    fn hitting_single_edge() {
        let g = Family::Path.snapshot(2).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let ht = hitting_time(&k).unwrap();
        assert!(close(ht.t_hit, 2.0, 1e-10));
    }

    // Stepwise oracle for the mixing time: propagate every start row one
    // step at a time and return the first t with worst-start TV <= 1/4.
    fn mixing_by_iteration(k: &TransitionKernel, cap: u64) -> Option<u64> {
        let n = k.order() as usize;
        let pi = k.stationary();
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|u| {
                let mut e = vec![0.0; n];
                e[u] = 1.0;
                e
            })
            .collect();
        let mut buf = vec![0.0; n];
        for t in 1..=cap {
            let mut worst: f64 = 0.0;
            for row in rows.iter_mut() {
                k.step_distribution(row, &mut buf);
                row.copy_from_slice(&buf);
                let tv: f64 = 0.5 * row.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>();
                worst = worst.max(tv);
            }
            if worst <= 0.25 {
                return Some(t);
            }
        }
        None
    }

    #[test]
    fn mixing_uniform_complete_is_one_step() {
        let k = TransitionKernel::uniform_complete(8).unwrap();
        assert_eq!(mixing_time(&k, 100), MixingOutcome::Mixed(1));
    }

    #[test]
    fn mixing_single_edge_is_one_step() {
        let g = Family::Path.snapshot(2).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        assert_eq!(mixing_time(&k, 100), MixingOutcome::Mixed(1));
    }

    #[test]
    fn mixing_path_sixteen_matches_iteration_oracle() {
        let g = Family::Path.snapshot(16).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let oracle = mixing_by_iteration(&k, 100_000).unwrap();
        assert_eq!(mixing_time(&k, 1_000_000), MixingOutcome::Mixed(oracle));
        // Θ(n²) magnitude
        let n2 = 16.0 * 16.0;
        assert!(oracle as f64 > 0.2 * n2 && (oracle as f64) < 5.0 * n2, "{oracle}");
    }

    #[test]
    fn mixing_matches_iteration_oracle_on_assorted_kernels() {
        for (fam, n) in [
            (Family::Path, 9u32),
            (Family::Lollipop, 10),
            (Family::Complete, 6),
        ] {
            let g = fam.snapshot(n).unwrap();
            for k in [
                TransitionKernel::lazy_simple(&g).unwrap(),
                TransitionKernel::lazy_metropolis(&g).unwrap(),
            ] {
                let oracle = mixing_by_iteration(&k, 200_000).unwrap();
                assert_eq!(mixing_time(&k, 1 << 40), MixingOutcome::Mixed(oracle));
            }
        }
    }

    #[test]
    fn mixing_cap_is_signalled() {
        let g = Family::Path.snapshot(32).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        assert_eq!(mixing_time(&k, 5), MixingOutcome::Exceeded { t_cap: 5 });
    }

    #[test]
    fn lambda2_uniform_complete_is_zero() {
        let k = TransitionKernel::uniform_complete(3).unwrap();
        assert!(lambda2(&k).unwrap().abs() < 1e-12);
    }

    #[test]
    fn survival_radius_uniform_complete_meets_hitting_bound_with_equality() {
        let k = TransitionKernel::uniform_complete(3).unwrap();
        for w in 0..3 {
            let lam = survival_radius(&k, w).unwrap();
            assert!(close(lam, 2.0 / 3.0, 1e-10), "{lam}");
        }
        let ht = hitting_time(&k).unwrap();
        assert!(close(1.0 - 1.0 / ht.t_hit, 2.0 / 3.0, 1e-10));
    }

    #[test]
    fn survival_radius_single_edge() {
        let g = Family::Path.snapshot(2).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        assert!(close(survival_radius(&k, 1).unwrap(), 0.5, 1e-10));
    }

    #[test]
    fn survival_radius_matches_dense_eigensolve() {
        // independent route: eigenvalues of the dense symmetrized matrix
        for (fam, n) in [(Family::Path, 8u32), (Family::Lollipop, 9)] {
            let g = fam.snapshot(n).unwrap();
            let k = TransitionKernel::lazy_simple(&g).unwrap();
            for w in 0..n {
                let sub = SubstochasticKernel::new(&k, w).unwrap();
                let pi = k.stationary();
                let mut a = sub.to_matrix();
                for u in 0..n as usize {
                    for v in 0..n as usize {
                        if a[(u, v)] != 0.0 {
                            a[(u, v)] *= (pi[u] / pi[v]).sqrt();
                        }
                    }
                }
                let eigs = nalgebra::SymmetricEigen::new(a).eigenvalues;
                let dense_max = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let power = sub.largest_eigenvalue().unwrap();
                assert!(close(power, dense_max, 1e-9), "w={w}: {power} vs {dense_max}");
            }
        }
    }

    #[test]
    fn survival_radius_path_endpoint_strictly_below_hitting_bound() {
        let g = Family::Path.snapshot(8).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let lam = survival_radius(&k, 7).unwrap();
        let ht = hitting_time(&k).unwrap();
        assert!(lam < 1.0 - 1.0 / ht.t_hit);
    }

    #[test]
    fn pi_ratio_symmetric_kernels() {
        let prev = TransitionKernel::uniform_complete(4).unwrap();
        let next = TransitionKernel::uniform_complete(5).unwrap();
        assert!(close(pi_ratio(&prev, &next).unwrap(), 5.0 / 4.0, 1e-15));
    }

    #[test]
    fn pi_ratio_lazy_simple_growing_complete() {
        let g2 = Family::Complete.snapshot(2).unwrap();
        let g3 = Family::Complete.snapshot(3).unwrap();
        let prev = TransitionKernel::lazy_simple(&g2).unwrap();
        let next = TransitionKernel::lazy_simple(&g3).unwrap();
        assert!(close(pi_ratio(&prev, &next).unwrap(), 1.5, 1e-15));
    }

    #[test]
    fn pi_norms_examples() {
        // identity case
        let pi = [0.25, 0.5, 0.25];
        assert!(close(pi_norm_sq_deviation(&pi, &pi).unwrap(), 0.0, 0.0));
        // point mass against uniform over n: n - 1 by direct summation
        for n in [2usize, 5, 9] {
            let mut xi = vec![0.0; n];
            xi[0] = 1.0;
            let pi = vec![1.0 / n as f64; n];
            assert!(close(
                pi_norm_sq_deviation(&xi, &pi).unwrap(),
                n as f64 - 1.0,
                1e-12
            ));
        }
        // uniform ξ against π = (1/4, 1/2, 1/4): direct sum gives
        // Σ π (ξ/π − 1)² = (1/3)² = 1/9 since every deviation is ±1/3.
        let xi = [1.0 / 3.0; 3];
        assert!(close(pi_norm_sq_deviation(&xi, &pi).unwrap(), 1.0 / 9.0, 1e-15));
        // inner product sanity
        assert!(close(pi_inner(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &pi), 1.0, 1e-15));
    }

    #[test]
    fn sandwich_bound_holds_on_sampled_sizes() {
        // 1/(1-λ₂) <= t_hit <= 2/(π_min (1-λ₂)) for lazy reversible kernels
        for n in [4u32, 8, 16, 32] {
            for fam in [Family::Path, Family::Complete, Family::Lollipop] {
                let g = fam.snapshot(n).unwrap();
                let k = TransitionKernel::lazy_simple(&g).unwrap();
                let lam = lambda2(&k).unwrap();
                let ht = hitting_time(&k).unwrap().t_hit;
                let lower = 1.0 / (1.0 - lam);
                let upper = 2.0 / (k.min_stationary() * (1.0 - lam));
                assert!(lower <= ht * (1.0 + 1e-6), "{fam:?} n={n}");
                assert!(ht <= upper * (1.0 + 1e-6), "{fam:?} n={n}");
            }
        }
    }

    #[test]
    fn contraction_per_step_bounded_by_lambda2() {
        let g = Family::Lollipop.snapshot(10).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let lam = lambda2(&k).unwrap();
        let pi = k.stationary().to_vec();
        let mut nu = vec![0.0; 10];
        nu[3] = 1.0;
        let mut next = vec![0.0; 10];
        for _ in 0..50 {
            let before = pi_norm_sq_deviation(&nu, &pi).unwrap().sqrt();
            k.step_distribution(&nu, &mut next);
            std::mem::swap(&mut nu, &mut next);
            let after = pi_norm_sq_deviation(&nu, &pi).unwrap().sqrt();
            assert!(after <= lam * before + INVARIANT_SLACK);
        }
    }

    #[test]
    fn stationary_tail_bound_from_multihit() {
        // started from π: Pr[τ_v > t] <= (1 - 1/t_hit)^t for lazy reversible
        let g = Family::Path.snapshot(8).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let t_hit = hitting_time(&k).unwrap().t_hit;
        for v in 0..8u32 {
            let sub = SubstochasticKernel::new(&k, v).unwrap();
            let mut x: Vec<f64> = k.stationary().to_vec();
            x[v as usize] = 0.0; // Pr_π[τ_v > 0] mass
            let mut buf = vec![0.0; 8];
            for t in 1..=(3.0 * t_hit) as u64 {
                sub.step(&x, &mut buf);
                x.copy_from_slice(&buf);
                let surv: f64 = x.iter().sum();
                let bound = (1.0 - 1.0 / t_hit).powi(t as i32);
                assert!(surv <= bound + INVARIANT_SLACK, "v={v} t={t}");
            }
        }
    }

    #[test]
    fn static_decay_from_worst_start() {
        // Pr[τ_v > c·e·t_hit] <= e^{-c}, via exact substochastic powers
        for n in [6u32, 16, 32] {
            let g = Family::Path.snapshot(n).unwrap();
            let k = TransitionKernel::lazy_simple(&g).unwrap();
            let t_hit = hitting_time(&k).unwrap().t_hit;
            for &c in &[1.0f64, 2.0, 3.0] {
                let t = (c * std::f64::consts::E * t_hit).ceil() as u64;
                let v = n - 1;
                let sub = SubstochasticKernel::new(&k, v).unwrap();
                // survival probability from each start = row sums of P_{v̄}^t
                let mut worst: f64 = 0.0;
                for u in 0..n {
                    if u == v {
                        continue;
                    }
                    let mut x = vec![0.0; n as usize];
                    x[u as usize] = 1.0;
                    let mut buf = vec![0.0; n as usize];
                    for _ in 0..t {
                        sub.step(&x, &mut buf);
                        std::mem::swap(&mut x, &mut buf);
                    }
                    worst = worst.max(x.iter().sum::<f64>());
                }
                assert!(worst <= (-c).exp() + INVARIANT_SLACK, "n={n} c={c}: {worst}");
            }
        }
    }

    #[test]
    fn report_collects_consistent_scalars() {
        let g = Family::Path.snapshot(6).unwrap();
        let k = TransitionKernel::lazy_simple(&g).unwrap();
        let rep = AnalysisReport::compute(&k, 1 << 30).unwrap();
        assert_eq!(rep.order, 6);
        assert!(rep.t_hit >= 1.0);
        assert!(rep.t_mix.steps().unwrap() >= 1);
        assert!(rep.lambda2 > 0.0 && rep.lambda2 < 1.0);
        assert!(rep.pi_min > 0.0);
        assert!(rep.max_survival_radius() <= 1.0 - 1.0 / rep.t_hit + INVARIANT_SLACK);
    }
}
