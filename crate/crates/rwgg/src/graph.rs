//! Growing-graph families and snapshots.
//!
//! A family produces the snapshot of order `n`; successive snapshots grow
//! monotonically, each adding exactly one vertex with at least one edge to an
//! existing vertex. Vertices are identified by arrival order; internal
//! indices are 0-based (`index k` is the paper-style label `v_{k+1}`), labels
//! in files and CSV output are 1-based.

use std::collections::HashSet;
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Tag identifying which generator produced a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    Complete,
    Path,
    Lollipop,
    ExpanderLike,
    Custom,
}

/// A growing-graph family: a rule assigning to every order `n` a connected
/// simple snapshot extending the order `n-1` one.
#[derive(Debug, Clone)]
pub enum Family {
    /// `K_n`.
    Complete,
    /// `v_1 - v_2 - ... - v_n`.
    Path,
    /// Odd-index vertices form a clique, even-index vertices a path, bridged
    /// by the edge `{v_1, v_2}`.
    Lollipop,
    /// Each arriving vertex attaches to `min(degree, n-1)` distinct existing
    /// vertices chosen uniformly by a seeded generator. Expansion is not
    /// guaranteed; it is measured downstream.
    ExpanderLike { degree: usize, seed: u64 },
    /// Explicit attachment edges: `increments[k]` holds the 0-based endpoints
    /// the vertex of index `k` connects to (all smaller than `k`).
    Custom { increments: Vec<Vec<u32>> },
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::Complete => FamilyTag::Complete,
            Family::Path => FamilyTag::Path,
            Family::Lollipop => FamilyTag::Lollipop,
            Family::ExpanderLike { .. } => FamilyTag::ExpanderLike,
            Family::Custom { .. } => FamilyTag::Custom,
        }
    }

    /// Attachment edges of the vertex with 0-based index `k` (endpoints < k).
    fn attachments(&self, k: u32) -> Result<Vec<u32>> {
        debug_assert!(k >= 1);
        match self {
            Family::Complete => Ok((0..k).collect()),
            Family::Path => Ok(vec![k - 1]),
            Family::Lollipop => {
                // index k is label k+1; odd labels join the clique, even
                // labels extend the path; v_2 bridges to v_1.
                let label = k + 1;
                if label == 2 {
                    Ok(vec![0])
                } else if label % 2 == 1 {
                    Ok((0..k).filter(|j| (j + 1) % 2 == 1).collect())
                } else {
                    Ok(vec![k - 2])
                }
            }
            Family::ExpanderLike { degree, seed } => {
                let want = (*degree).min(k as usize);
                // Per-vertex stream keeps snapshots consistent across calls.
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(k as u64);
                let picked = sample(&mut rng, k as usize, want);
                Ok(picked.iter().map(|j| j as u32).collect())
            }
            Family::Custom { increments } => {
                increments.get(k as usize).cloned().ok_or_else(|| {
                    Error::range("custom family order", k + 1, format!("<= {}", increments.len()))
                })
            }
        }
    }

    /// Build the snapshot of order `n` (the spec's `grow` operation).
    pub fn snapshot(&self, n: u32) -> Result<GraphSnapshot> {
        if n == 0 {
            return Err(Error::range("graph order", 0, ">= 1"));
        }
        let mut g = self.initial_snapshot()?;
        while g.order < n {
            self.extend(&mut g)?;
        }
        Ok(g)
    }

    /// Snapshot of order 1 (a single vertex).
    pub fn initial_snapshot(&self) -> Result<GraphSnapshot> {
        Ok(GraphSnapshot {
            order: 1,
            edges: Vec::new(),
            adjacency: vec![Vec::new()],
            family: self.tag(),
        })
    }

    /// Grow `g` in place by one vertex.
    pub fn extend(&self, g: &mut GraphSnapshot) -> Result<()> {
        let k = g.order; // new 0-based index
        let attach = self.attachments(k)?;
        if attach.is_empty() {
            return Err(Error::Structural(format!(
                "vertex {} arrives with no attachment edge",
                k + 1
            )));
        }
        g.adjacency.push(Vec::new());
        for &u in &attach {
            if u >= k {
                return Err(Error::Structural(format!(
                    "vertex {} attaches to non-existing vertex {}",
                    k + 1,
                    u + 1
                )));
            }
            g.edges.push((u, k));
            g.adjacency[u as usize].push(k);
            g.adjacency[k as usize].push(u);
        }
        g.order += 1;
        Ok(())
    }
}

/// The graph `G^(n)`: vertex set `{0, .., n-1}` plus an undirected simple
/// edge set, in arrival order.
#[derive(Debug, Clone)]
pub struct GraphSnapshot {
    order: u32,
    /// Edges `(u, v)` with `u < v`, in arrival order.
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
    family: FamilyTag,
}

impl GraphSnapshot {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.order == 0 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.order as f64
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return false;
        }
        let mut seen = vec![false; self.order as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.order
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        for &(u, v) in &self.edges {
            if u == v || !seen.insert((u, v)) {
                return false;
            }
        }
        true
    }

    /// Edges as 1-based label pairs, sorted, for output.
    pub fn edges_labeled(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect();
        out.sort_unstable();
        out
    }
}

/// Parse a custom family from an edge-list file: one `u v` line (1-based
/// labels) per edge; the attachment edges of vertex `m` are all lines whose
/// larger endpoint is `m`.
pub fn custom_family_from_edge_list(path: &Path) -> Result<Family> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut max_label = 1u32;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (a, b): (u32, u32) = match (
            it.next().and_then(|s| s.parse().ok()),
            it.next().and_then(|s| s.parse().ok()),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: "expected `u v` with 1-based labels".into(),
                })
            }
        };
        if a == 0 || b == 0 || a == b {
            return Err(Error::Parse {
                line: lineno + 1,
                reason: format!("invalid edge {a} {b}"),
            });
        }
        let (lo, hi) = (a.min(b), a.max(b));
        pairs.push((lo, hi));
        max_label = max_label.max(hi);
    }
    let mut increments: Vec<Vec<u32>> = vec![Vec::new(); max_label as usize];
    let mut seen = HashSet::new();
    for (lo, hi) in pairs {
        if !seen.insert((lo, hi)) {
            return Err(Error::Structural(format!("duplicate edge {lo} {hi}")));
        }
        increments[(hi - 1) as usize].push(lo - 1);
    }
    for (k, inc) in increments.iter().enumerate().skip(1) {
        if inc.is_empty() {
            return Err(Error::Structural(format!(
                "vertex {} has no attachment edge to an earlier vertex",
                k + 1
            )));
        }
    }
    Ok(Family::Custom { increments })
}

/// A star on `n` vertices with `v_1` at the center, as a custom family.
/// Used by tests and kernel examples.
pub fn star_family(n: u32) -> Family {
    let mut increments: Vec<Vec<u32>> = vec![Vec::new()];
    for _k in 1..n {
        increments.push(vec![0]);
    }
    Family::Custom { increments }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_three_edges() {
        let g = Family::Complete.snapshot(3).unwrap();
        assert_eq!(g.edges_labeled(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn path_five_edges() {
        let g = Family::Path.snapshot(5).unwrap();
        assert_eq!(g.edges_labeled(), vec![(1, 2), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn lollipop_order_four() {
        // clique edge {1,3}, path edge {2,4}, bridge {1,2}
        let g = Family::Lollipop.snapshot(4).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges_labeled(), vec![(1, 2), (1, 3), (2, 4)]);
    }

    #[test]
    fn lollipop_edge_counts_match_closed_form() {
        // |E^(2i)| = 1 + i(i-1)/2 + (i-1)
        for i in 1..20u32 {
            let g = Family::Lollipop.snapshot(2 * i).unwrap();
            let expect = 1 + i * (i - 1) / 2 + (i - 1);
            assert_eq!(g.edge_count() as u32, expect, "order {}", 2 * i);
        }
    }

    #[test]
    fn zero_order_is_an_error() {
        assert!(Family::Complete.snapshot(0).is_err());
    }

    #[test]
    fn families_grow_monotonically_and_stay_connected() {
        let families: Vec<Family> = vec![
            Family::Complete,
            Family::Path,
            Family::Lollipop,
            Family::ExpanderLike { degree: 5, seed: 17 },
        ];
        for fam in families {
            let mut g = fam.initial_snapshot().unwrap();
            let mut prev_edges: HashSet<(u32, u32)> = HashSet::new();
            for n in 2..=300u32 {
                fam.extend(&mut g).unwrap();
                assert_eq!(g.order(), n);
                let edges: HashSet<(u32, u32)> = g.edges().iter().copied().collect();
                assert!(prev_edges.is_subset(&edges), "{:?} order {}", fam.tag(), n);
                assert!(g.is_connected(), "{:?} order {}", fam.tag(), n);
                assert!(g.is_simple(), "{:?} order {}", fam.tag(), n);
                prev_edges = edges;
            }
        }
    }

    #[test]
    fn lollipop_edge_growth_ratio_is_one_plus_constant_over_i() {
        // feeds the simple-walk theorem hypothesis |E^(i)|/|E^(i-1)| <= 1 + K/i
        let mut max_k = 0.0f64;
        for i in 3..=300u32 {
            let prev = Family::Lollipop.snapshot(i - 1).unwrap().edge_count() as f64;
            let cur = Family::Lollipop.snapshot(i).unwrap().edge_count() as f64;
            let k = (cur / prev - 1.0) * i as f64;
            max_k = max_k.max(k);
        }
        assert!(max_k <= 4.0, "measured K1 = {max_k}");
    }

    #[test]
    fn expander_like_is_reproducible() {
        let fam = Family::ExpanderLike { degree: 5, seed: 99 };
        let a = fam.snapshot(64).unwrap();
        let b = fam.snapshot(64).unwrap();
        assert_eq!(a.edges(), b.edges());
        // prefix property: order-40 snapshot is a prefix of order-64 edges
        let c = fam.snapshot(40).unwrap();
        assert_eq!(&a.edges()[..c.edge_count()], c.edges());
    }

    #[test]
    fn expander_like_attaches_five_when_possible() {
        let fam = Family::ExpanderLike { degree: 5, seed: 3 };
        let g = fam.snapshot(30).unwrap();
        // vertex of index 20 arrived with exactly 5 attachments
        let n20 = g
            .edges()
            .iter()
            .filter(|&&(_, v)| v == 20)
            .count();
        assert_eq!(n20, 5);
    }

    #[test]
    fn custom_edge_list_file() {
        let dir = std::env::temp_dir().join("rwgg_graph_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("star4.txt");
        std::fs::write(&path, "1 2\n1 3\n1 4\n").unwrap();
        let fam = custom_family_from_edge_list(&path).unwrap();
        let g = fam.snapshot(4).unwrap();
        assert_eq!(g.edges_labeled(), vec![(1, 2), (1, 3), (1, 4)]);
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn custom_edge_list_rejects_orphan_vertex() {
        let dir = std::env::temp_dir().join("rwgg_graph_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("orphan.txt");
        // vertex 3 never attaches to an earlier vertex
        std::fs::write(&path, "1 2\n4 3\n").unwrap();
        assert!(custom_family_from_edge_list(&path).is_err());
    }
}
