//! Per-round transition matrices and their stationary distributions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{FamilyTag, GraphSnapshot};

/// Which random walk rule builds the per-round kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkKind {
    /// `P(u,v) = 1/n` for every pair, including `u = v`.
    UniformComplete,
    /// `P(u,v) = 1/(2 d_u)` on edges, `P(u,u) = 1/2`.
    LazySimple,
    /// `P(u,v) = 1/(2 max{d_u, d_v})` on edges, residual on the diagonal.
    LazyMetropolis,
    /// Birth-death chain on a path: endpoints hold with `p`, interior
    /// vertices step each way with `q` and hold with `1-2q`.
    PathChain { p: f64, q: f64 },
}

impl WalkKind {
    pub fn name(&self) -> &'static str {
        match self {
            WalkKind::UniformComplete => "uniform_complete",
            WalkKind::LazySimple => "lazy_simple",
            WalkKind::LazyMetropolis => "lazy_metropolis",
            WalkKind::PathChain { .. } => "path_chain",
        }
    }
}

/// Structural flags carried by a kernel and verified numerically in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelFlags {
    pub lazy: bool,
    pub reversible: bool,
    pub symmetric: bool,
    pub simple: bool,
}

/// A row-stochastic transition matrix with its stationary distribution.
///
/// The dense matrix feeds the exact engines; the sparse rows feed stepwise
/// propagation and simulation.
#[derive(Debug, Clone)]
pub struct TransitionKernel {
    order: u32,
    matrix: DMatrix<f64>,
    /// Nonzero entries per row: `(column, probability)`.
    rows: Vec<Vec<(u32, f64)>>,
    stationary: Vec<f64>,
    walk: WalkKind,
    flags: KernelFlags,
}

impl TransitionKernel {
    fn from_matrix(
        matrix: DMatrix<f64>,
        stationary: Vec<f64>,
        walk: WalkKind,
        flags: KernelFlags,
    ) -> Self {
        let n = matrix.nrows();
        let mut rows = Vec::with_capacity(n);
        for u in 0..n {
            let mut row = Vec::new();
            for v in 0..n {
                let p = matrix[(u, v)];
                if p > 0.0 {
                    row.push((v as u32, p));
                }
            }
            rows.push(row);
        }
        TransitionKernel {
            order: n as u32,
            matrix,
            rows,
            stationary,
            walk,
            flags,
        }
    }

    /// `P(u,v) = 1/n` for all pairs. Not lazy for `n >= 3`; the closed-form
    /// complete-graph engine covers the theorems this walk appears in.
    pub fn uniform_complete(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::range("kernel order", 0, ">= 1"));
        }
        let nn = n as usize;
        let matrix = DMatrix::from_element(nn, nn, 1.0 / n as f64);
        let stationary = vec![1.0 / n as f64; nn];
        let flags = KernelFlags {
            lazy: false,
            reversible: true,
            symmetric: true,
            simple: false,
        };
        Ok(Self::from_matrix(matrix, stationary, WalkKind::UniformComplete, flags))
    }

    /// Lazy simple random walk on `g`; `π(v) = d_v / (2|E|)`.
    pub fn lazy_simple(g: &GraphSnapshot) -> Result<Self> {
        let n = g.order() as usize;
        if n == 1 {
            return Ok(Self::trivial(WalkKind::LazySimple));
        }
        let mut matrix = DMatrix::zeros(n, n);
        for u in 0..n as u32 {
            let d = g.degree(u) as f64;
            matrix[(u as usize, u as usize)] = 0.5;
            for &v in g.neighbors(u) {
                matrix[(u as usize, v as usize)] = 0.5 / d;
            }
        }
        let two_m = 2.0 * g.edge_count() as f64;
        let stationary = (0..n as u32).map(|v| g.degree(v) as f64 / two_m).collect();
        let regular = (0..n as u32).all(|v| g.degree(v) == g.degree(0));
        let flags = KernelFlags {
            lazy: true,
            reversible: true,
            symmetric: regular,
            simple: true,
        };
        Ok(Self::from_matrix(matrix, stationary, WalkKind::LazySimple, flags))
    }

    /// Lazy Metropolis walk on `g`; symmetric, hence `π` uniform. The row
    /// mass leaving `u` is at most `d_u/(2 d_u) = 1/2`, so the walk is lazy.
    pub fn lazy_metropolis(g: &GraphSnapshot) -> Result<Self> {
        let n = g.order() as usize;
        if n == 1 {
            return Ok(Self::trivial(WalkKind::LazyMetropolis));
        }
        let mut matrix = DMatrix::zeros(n, n);
        for u in 0..n as u32 {
            let mut off = 0.0;
            for &v in g.neighbors(u) {
                let p = 0.5 / g.degree(u).max(g.degree(v)) as f64;
                matrix[(u as usize, v as usize)] = p;
                off += p;
            }
            matrix[(u as usize, u as usize)] = 1.0 - off;
        }
        let stationary = vec![1.0 / n as f64; n];
        let flags = KernelFlags {
            lazy: true,
            reversible: true,
            symmetric: true,
            simple: false,
        };
        Ok(Self::from_matrix(matrix, stationary, WalkKind::LazyMetropolis, flags))
    }

    /// The two-parameter path chain. Requires `p >= q`, `q <= 1/2`, and
    /// `q > 0` when `n >= 3` (interior vertices would otherwise freeze).
    pub fn path_chain(n: u32, p: f64, q: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::range("path chain order", n, ">= 2"));
        }
        for (name, x) in [("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::config(name, format!("{x} outside [0, 1]")));
            }
        }
        if p < q {
            return Err(Error::config("p", format!("p = {p} < q = {q}")));
        }
        if q > 0.5 {
            return Err(Error::config("q", format!("q = {q} > 1/2")));
        }
        if n >= 3 && q == 0.0 {
            return Err(Error::config("q", "q = 0 freezes interior vertices"));
        }
        let nn = n as usize;
        let mut matrix = DMatrix::zeros(nn, nn);
        matrix[(0, 0)] = p;
        matrix[(0, 1)] = 1.0 - p;
        matrix[(nn - 1, nn - 1)] = p;
        matrix[(nn - 1, nn - 2)] = 1.0 - p;
        for j in 1..nn - 1 {
            matrix[(j, j - 1)] = q;
            matrix[(j, j)] = 1.0 - 2.0 * q;
            matrix[(j, j + 1)] = q;
        }
        // Detailed balance: π(2)/π(1) = (1-p)/q and interior ratios are 1.
        let mut stationary = vec![1.0; nn];
        if nn > 2 {
            let interior = (1.0 - p) / q;
            for w in stationary.iter_mut().take(nn - 1).skip(1) {
                *w = interior;
            }
        }
        let total: f64 = stationary.iter().sum();
        for w in &mut stationary {
            *w /= total;
        }
        let lazy = p >= 0.5 && (n == 2 || 1.0 - 2.0 * q >= 0.5);
        let symmetric = n == 2 || (1.0 - p - q).abs() < 1e-15;
        let flags = KernelFlags {
            lazy,
            reversible: true,
            symmetric,
            simple: false,
        };
        Ok(Self::from_matrix(matrix, stationary, WalkKind::PathChain { p, q }, flags))
    }

    /// The 1x1 kernel used while the graph is a single vertex.
    pub fn trivial(walk: WalkKind) -> Self {
        let flags = KernelFlags {
            lazy: !matches!(walk, WalkKind::UniformComplete),
            reversible: true,
            symmetric: true,
            simple: matches!(walk, WalkKind::LazySimple),
        };
        Self::from_matrix(DMatrix::from_element(1, 1, 1.0), vec![1.0], walk, flags)
    }

    /// Build the kernel a walk rule induces on a snapshot, validating that
    /// the rule applies to the family.
    pub fn for_snapshot(walk: WalkKind, g: &GraphSnapshot) -> Result<Self> {
        if g.order() == 1 {
            return Ok(Self::trivial(walk));
        }
        match walk {
            WalkKind::UniformComplete => {
                if g.family() != FamilyTag::Complete {
                    return Err(Error::config(
                        "walk",
                        "uniform_complete requires the complete family",
                    ));
                }
                Self::uniform_complete(g.order())
            }
            WalkKind::LazySimple => Self::lazy_simple(g),
            WalkKind::LazyMetropolis => Self::lazy_metropolis(g),
            WalkKind::PathChain { p, q } => {
                if g.family() != FamilyTag::Path {
                    return Err(Error::config("walk", "path_chain requires the path family"));
                }
                Self::path_chain(g.order(), p, q)
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn entry(&self, u: u32, v: u32) -> f64 {
        self.matrix[(u as usize, v as usize)]
    }

    pub fn sparse_row(&self, u: u32) -> &[(u32, f64)] {
        &self.rows[u as usize]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn min_stationary(&self) -> f64 {
        self.stationary.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn walk(&self) -> WalkKind {
        self.walk
    }

    pub fn flags(&self) -> KernelFlags {
        self.flags
    }

    /// Propagate a distribution one step: `out = x P`, using the sparse rows.
    pub fn step_distribution(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.order as usize);
        debug_assert_eq!(out.len(), self.order as usize);
        out.fill(0.0);
        for (u, row) in self.rows.iter().enumerate() {
            let mass = x[u];
            if mass == 0.0 {
                continue;
            }
            for &(v, p) in row {
                out[v as usize] += mass * p;
            }
        }
    }

    /// Check the declared structure numerically: row sums, laziness,
    /// detailed balance, symmetry and stationarity, all within `1e-12`.
    pub fn verify(&self) -> Result<()> {
        let n = self.order as usize;
        let tol = 1e-12;
        for u in 0..n {
            let sum: f64 = self.matrix.row(u).iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::Structural(format!(
                    "row {u} sums to {sum}, not 1"
                )));
            }
            if self.flags.lazy && self.matrix[(u, u)] < 0.5 - tol {
                return Err(Error::Structural(format!(
                    "kernel flagged lazy but P({u},{u}) = {}",
                    self.matrix[(u, u)]
                )));
            }
        }
        let pi_sum: f64 = self.stationary.iter().sum();
        if (pi_sum - 1.0).abs() > tol {
            return Err(Error::Structural(format!("stationary sums to {pi_sum}")));
        }
        for v in 0..n {
            let mut flow = 0.0;
            for u in 0..n {
                flow += self.stationary[u] * self.matrix[(u, v)];
            }
            if (flow - self.stationary[v]).abs() > tol {
                return Err(Error::Structural(format!(
                    "πP ≠ π at vertex {v}: {flow} vs {}",
                    self.stationary[v]
                )));
            }
        }
        for u in 0..n {
            for v in 0..n {
                if self.flags.reversible {
                    let lhs = self.stationary[u] * self.matrix[(u, v)];
                    let rhs = self.stationary[v] * self.matrix[(v, u)];
                    if (lhs - rhs).abs() > tol {
                        return Err(Error::Structural(format!(
                            "detailed balance fails at ({u},{v})"
                        )));
                    }
                }
                if self.flags.symmetric
                    && (self.matrix[(u, v)] - self.matrix[(v, u)]).abs() > tol
                {
                    return Err(Error::Structural(format!("asymmetric at ({u},{v})")));
                }
            }
        }
        Ok(())
    }
}
