//! Accelerated c-chain recognition.
//!
//! The chain is halved recursively into subchains that share their middle
//! vertex, and every node of the resulting recursion tree owns a range
//! counter over its vertices. For each pair `i < k` the interior
//! `p_{i+1} .. p_{k-1}` splits into `O(log n)` maximal tree nodes, and the
//! triple condition for all `j` holds iff each of those nodes lies inside
//! the focal ellipse with foci `p_i`, `p_k` and major axis `c |p_i p_k|`.
//!
//! Node intervals overlap in their shared endpoints, so canonical
//! decompositions work on half-open *owned* intervals: a node `[lo, hi]`
//! owns `[lo, hi)`, except nodes on the right spine which own `[lo, hi]`.
//! Owned intervals partition the vertex set at every level.

use serde::Serialize;

use crate::chain::{MinC, PolygonalChain, Ratio, TripleWitness};
use crate::error::{invalid, Error, Result};
use crate::geometry::{dist, FocalEllipse, Point};
use crate::range_search::{Backend, RangeCounter};
use crate::EPS_REL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

#[derive(Debug, Clone)]
pub struct TreeNode {
    /// 0-based inclusive vertex range.
    lo: usize,
    hi: usize,
    /// Exclusive end of the owned range `[lo, own_end)`.
    own_end: usize,
    children: Option<(NodeId, NodeId)>,
    depth: usize,
    index: RangeCounter,
}

impl TreeNode {
    /// 1-based inclusive vertex interval covered by this node's index.
    pub fn interval(&self) -> (usize, usize) {
        (self.lo + 1, self.hi + 1)
    }

    /// 1-based inclusive owned interval, `None` when empty.
    pub fn owned_interval(&self) -> Option<(usize, usize)> {
        (self.own_end > self.lo).then_some((self.lo + 1, self.own_end))
    }

    pub fn children(&self) -> Option<(NodeId, NodeId)> {
        self.children
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn index(&self) -> &RangeCounter {
        &self.index
    }
}

/// Result of one c-chain decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionOutcome {
    pub is_c_chain: bool,
    pub witness: Option<TripleWitness>,
    pub queries_issued: u64,
    pub pairs_tested: u64,
}

#[derive(Debug, Clone)]
pub struct RecursionTree {
    chain: PolygonalChain,
    nodes: Vec<TreeNode>,
    backend: Backend,
}

impl RecursionTree {
    pub fn build(chain: &PolygonalChain, backend: Backend) -> RecursionTree {
        let n = chain.len();
        let mut tree = RecursionTree {
            chain: chain.clone(),
            nodes: Vec::with_capacity(2 * n),
            backend,
        };
        tree.add_node(0, n - 1, n, 0);
        tree
    }

    fn add_node(&mut self, lo: usize, hi: usize, own_end: usize, depth: usize) -> NodeId {
        let id = NodeId(self.nodes.len());
        let index = RangeCounter::from_slice(&self.chain.vertices()[lo..=hi], self.backend);
        self.nodes.push(TreeNode {
            lo,
            hi,
            own_end,
            children: None,
            depth,
            index,
        });
        if hi > lo {
            let (left, right) = if hi == lo + 1 {
                (
                    self.add_node(lo, lo, lo + 1, depth + 1),
                    self.add_node(hi, hi, own_end, depth + 1),
                )
            } else {
                // 1-based split at ceil((lo + hi)/2), shared by both halves
                let mid = (lo + hi).div_ceil(2);
                (
                    self.add_node(lo, mid, mid, depth + 1),
                    self.add_node(mid, hi, own_end, depth + 1),
                )
            };
            self.nodes[id.0].children = Some((left, right));
        }
        id
    }

    pub fn chain(&self) -> &PolygonalChain {
        &self.chain
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Largest node depth; the root has depth 0.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Total number of points stored across all node indexes.
    pub fn stored_points(&self) -> usize {
        self.nodes.iter().map(|n| n.index.len()).sum()
    }

    /// Maximal nodes whose owned intervals partition the interior
    /// `[i+1, k-1]` of the 1-based pair `(i, k)`, left to right.
    ///
    /// An empty interior (`k <= i + 1`) yields an empty list.
    pub fn canonical_decomposition(&self, i: usize, k: usize) -> Result<Vec<NodeId>> {
        let n = self.chain.len();
        if i == 0 || k == 0 || i > n || k > n {
            return Err(Error::Index { i, j: i, k, n });
        }
        let mut out = Vec::new();
        if k > i + 1 {
            self.decompose(self.root(), i, k - 1, &mut out);
        }
        Ok(out)
    }

    /// Collects nodes owning parts of the 0-based half-open range `[a, b)`.
    fn decompose(&self, id: NodeId, a: usize, b: usize, out: &mut Vec<NodeId>) {
        let node = &self.nodes[id.0];
        let (lo, end) = (node.lo, node.own_end);
        if end <= a || b <= lo || end <= lo {
            return;
        }
        if a <= lo && end <= b {
            out.push(id);
            return;
        }
        if let Some((l, r)) = node.children {
            self.decompose(l, a, b, out);
            self.decompose(r, a, b, out);
        }
    }

    /// Decide whether the chain is a c-chain.
    ///
    /// Pairs are visited by increasing index gap; the first failing pair
    /// yields the witness, located by descending the failing node.
    pub fn decide(&self, c: f64) -> DecisionOutcome {
        let n = self.chain.len();
        let mut outcome = DecisionOutcome {
            is_c_chain: true,
            witness: None,
            queries_issued: 0,
            pairs_tested: 0,
        };
        if n < 3 {
            return outcome;
        }
        if c == 1.0 && self.chain.is_monotone_collinear() {
            return outcome;
        }
        let v = self.chain.vertices();
        let mut canon = Vec::with_capacity(64);
        for gap in 2..n {
            for i in 0..n - gap {
                let k = i + gap;
                outcome.pairs_tested += 1;
                let ellipse = FocalEllipse::new(v[i], v[k], c);
                canon.clear();
                self.decompose(self.root(), i + 1, k, &mut canon);
                for &id in &canon {
                    outcome.queries_issued += 1;
                    if self.nodes[id.0].index.all_in_ellipse(&ellipse).is_err() {
                        let j = self.descend(id, &ellipse, &mut outcome.queries_issued);
                        outcome.is_c_chain = false;
                        outcome.witness = Some(self.chain.witness0(i, j, k));
                        return outcome;
                    }
                }
            }
        }
        outcome
    }

    /// Smallest vertex of a failing node outside the ellipse, found by
    /// re-querying children.
    fn descend(&self, mut id: NodeId, ellipse: &FocalEllipse, queries: &mut u64) -> usize {
        while let Some((left, right)) = self.nodes[id.0].children {
            *queries += 1;
            id = if self.nodes[left.0].index.all_in_ellipse(ellipse).is_err() {
                left
            } else {
                right
            };
        }
        self.nodes[id.0].lo
    }

    /// Minimum c by bisection over [`decide`](Self::decide).
    ///
    /// The result `c` satisfies `decide(c)` and not `decide(c * (1 - rel_tol))`.
    pub fn min_c_bisect(&self, rel_tol: f64) -> Result<MinC> {
        if !(rel_tol >= 1e-12) {
            return invalid(format!(
                "relative tolerance must be >= 1e-12, got {rel_tol}"
            ));
        }
        let chain = &self.chain;
        let n = chain.len();
        if n == 2 {
            return Ok(MinC {
                value: Ratio::Bounded(1.0),
                witness: None,
            });
        }
        let trivial = MinC {
            value: Ratio::Bounded(1.0),
            witness: Some(chain.witness0(0, 1, 2)),
        };
        let Some(closest) = closest_positive_distance(chain.vertices()) else {
            return Ok(trivial);
        };
        let mut hi = (2.0 * chain.bounding_box().diagonal() / closest).max(1.0);
        loop {
            let out = self.decide(hi);
            match out.witness {
                None => break,
                Some(w) if w.ratio.is_unbounded() => {
                    return Ok(MinC {
                        value: Ratio::Unbounded,
                        witness: Some(w),
                    })
                }
                Some(w) => hi = (2.0 * hi).max(2.0 * w.ratio.as_f64()),
            }
        }
        let first = self.decide(1.0);
        let Some(mut witness) = first.witness else {
            return Ok(trivial);
        };
        let mut lo = raise_floor(1.0, &witness);
        while hi > lo * (1.0 + rel_tol) {
            let mid = (lo * hi).sqrt().clamp(lo, hi);
            let out = self.decide(mid);
            match out.witness {
                None => hi = mid,
                Some(w) => {
                    witness = w;
                    lo = raise_floor(mid, &w);
                }
            }
        }
        Ok(MinC {
            value: Ratio::Bounded(hi),
            witness: Some(witness),
        })
    }
}

/// A failing witness with ratio `r` certifies that every threshold below
/// `r / (1 + EPS_REL)` fails too.
fn raise_floor(lo: f64, witness: &TripleWitness) -> f64 {
    let r = witness.ratio.as_f64();
    lo.max(r / (1.0 + EPS_REL) * (1.0 - 1e-12))
}

/// Smallest positive distance between any two points, by an x-sorted sweep.
fn closest_positive_distance(points: &[Point]) -> Option<f64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut best = f64::INFINITY;
    for (s, p) in pts.iter().enumerate() {
        for q in &pts[s + 1..] {
            if q.x - p.x >= best {
                break;
            }
            let d = dist(*p, *q);
            if d > 0.0 && d < best {
                best = d;
            }
        }
    }
    best.is_finite().then_some(best)
}

pub fn build_tree(chain: &PolygonalChain, backend: Backend) -> RecursionTree {
    RecursionTree::build(chain, backend)
}

pub fn decide_c_chain(chain: &PolygonalChain, c: f64, backend: Backend) -> Result<DecisionOutcome> {
    if !(c >= 1.0) {
        return invalid(format!("threshold must be >= 1, got {c}"));
    }
    Ok(RecursionTree::build(chain, backend).decide(c))
}

pub fn min_c_bisect(chain: &PolygonalChain, rel_tol: f64, backend: Backend) -> Result<MinC> {
    RecursionTree::build(chain, backend).min_c_bisect(rel_tol)
}
