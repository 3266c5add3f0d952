//! Polygonal chains and the exact reference computations on them: length,
//! stretch factor, triple ratios, minimum c, and simplicity.
//!
//! The routines here are the brute-force oracles the accelerated recognizer
//! in [`crate::recognition`] is checked against, so they favour directness
//! over speed.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{dist, segments_intersect, Aabb, Point, Segment, TouchPolicy};
use crate::{EPS_ABS, EPS_REL};

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalChain {
    vertices: Vec<Point>,
}

/// A triple ratio `(|p_i p_j| + |p_j p_k|) / |p_i p_k|`, or `Unbounded` when
/// `p_i` and `p_k` coincide while `p_j` does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Bounded(f64),
    Unbounded,
}

impl Ratio {
    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Bounded(v) => Some(v),
            Ratio::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Ratio::Unbounded)
    }

    /// `Unbounded` as `+inf`.
    pub fn as_f64(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    /// Whether the ratio satisfies the c-chain inequality at threshold `c`
    /// with the shared relative tolerance.
    pub fn within(self, c: f64) -> bool {
        match self {
            Ratio::Bounded(v) => v <= c * (1.0 + EPS_REL),
            Ratio::Unbounded => false,
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Ratio::Unbounded, Ratio::Unbounded) => Some(Ordering::Equal),
            (Ratio::Unbounded, _) => Some(Ordering::Greater),
            (_, Ratio::Unbounded) => Some(Ordering::Less),
            (Ratio::Bounded(a), Ratio::Bounded(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Bounded(v) => write!(f, "{v:.9}"),
            Ratio::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Bounded(v) => s.serialize_f64(*v),
            Ratio::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// Vertex triple `i < j < k` (1-based) together with its ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub ratio: Ratio,
}

impl fmt::Display for TripleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} ratio {}", self.i, self.j, self.k, self.ratio)
    }
}

/// Minimum c for which a chain is a c-chain, with an attaining triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinC {
    pub value: Ratio,
    pub witness: Option<TripleWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub simple: bool,
    /// 1-based indices of the first offending segment pair; segment `s` joins
    /// vertices `s` and `s + 1`.
    pub offending: Option<(usize, usize)>,
}

/// Ratio of the triple with 0-based indices, given the three distances.
///
/// `eps` is the degeneracy threshold for the `p_i p_k` distance.
#[inline]
pub(crate) fn ratio_from_distances(d_ij: f64, d_jk: f64, d_ik: f64, eps: f64) -> Ratio {
    let num = d_ij + d_jk;
    if d_ik <= eps {
        if num <= eps {
            Ratio::Bounded(1.0)
        } else {
            Ratio::Unbounded
        }
    } else {
        Ratio::Bounded((num / d_ik).max(1.0))
    }
}

#[inline]
pub(crate) fn magnitude(p: &Point) -> f64 {
    1.0_f64.max(p.x.abs()).max(p.y.abs())
}

impl PolygonalChain {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        Ok(PolygonalChain { vertices })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Point::from(c)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    /// 1-based vertex access.
    pub fn vertex(&self, index: usize) -> Point {
        self.vertices[index - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    /// Whether two consecutive vertices coincide.
    pub fn has_degenerate_segment(&self) -> bool {
        self.segments().any(|s| s.is_degenerate())
    }

    pub fn bounding_box(&self) -> Aabb {
        Aabb::of_points(&self.vertices).expect("chain has vertices")
    }

    /// Degeneracy threshold for the distance between vertices `i` and `k` (0-based).
    #[inline]
    pub(crate) fn pair_eps(&self, i: usize, k: usize) -> f64 {
        EPS_ABS * magnitude(&self.vertices[i]).max(magnitude(&self.vertices[k]))
    }

    pub fn chain_length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }

    pub fn baseline(&self) -> f64 {
        dist(self.first(), self.last())
    }

    pub fn stretch_factor(&self) -> Result<f64> {
        let base = self.baseline();
        if base <= self.pair_eps(0, self.len() - 1) {
            return Err(Error::ZeroBaseline);
        }
        Ok(self.chain_length() / base)
    }

    /// Ratio of the 1-based triple `(i, j, k)`.
    pub fn triple_ratio(&self, i: usize, j: usize, k: usize) -> Result<Ratio> {
        let n = self.len();
        if !(1 <= i && i < j && j < k && k <= n) {
            return Err(Error::Index { i, j, k, n });
        }
        Ok(self.ratio0(i - 1, j - 1, k - 1))
    }

    #[inline]
    pub(crate) fn ratio0(&self, i: usize, j: usize, k: usize) -> Ratio {
        let v = &self.vertices;
        ratio_from_distances(
            dist(v[i], v[j]),
            dist(v[j], v[k]),
            dist(v[i], v[k]),
            self.pair_eps(i, k),
        )
    }

    pub(crate) fn witness0(&self, i: usize, j: usize, k: usize) -> TripleWitness {
        TripleWitness {
            i: i + 1,
            j: j + 1,
            k: k + 1,
            ratio: self.ratio0(i, j, k),
        }
    }

    /// Exact minimum c by scanning all `C(n, 3)` triples.
    ///
    /// Ties go to the lexicographically smallest triple; an unbounded triple
    /// dominates every bounded one.
    pub fn min_c_bruteforce(&self) -> MinC {
        let v = &self.vertices;
        let n = v.len();
        let mags: Vec<f64> = v.iter().map(magnitude).collect();
        let mut best = Ratio::Bounded(1.0);
        let mut witness = None;
        for i in 0..n {
            for j in i + 1..n {
                let d_ij = dist(v[i], v[j]);
                for k in j + 1..n {
                    let eps = EPS_ABS * mags[i].max(mags[k]);
                    let r = ratio_from_distances(d_ij, dist(v[j], v[k]), dist(v[i], v[k]), eps);
                    if witness.is_none() || r > best {
                        best = r;
                        witness = Some(TripleWitness {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            ratio: r,
                        });
                        if r.is_unbounded() {
                            return MinC {
                                value: best,
                                witness,
                            };
                        }
                    }
                }
            }
        }
        MinC {
            value: best,
            witness,
        }
    }

    /// `Ok(())` if the chain is a c-chain, otherwise a violating triple.
    pub fn is_c_chain_bruteforce(&self, c: f64) -> std::result::Result<(), TripleWitness> {
        let m = self.min_c_bruteforce();
        match m.witness {
            Some(w) if !m.value.within(c) => Err(w),
            _ => Ok(()),
        }
    }

    /// Linear-time test for the 1-chain property: every edge points along
    /// `p_1 -> p_n` within the relative tolerance.
    ///
    /// Acceptance implies every triple ratio is at most `1 + EPS_REL`.
    /// Chains whose endpoints coincide are rejected.
    pub fn is_monotone_collinear(&self) -> bool {
        let base = self.last() - self.first();
        let len = base.norm();
        if len <= self.pair_eps(0, self.len() - 1) {
            return false;
        }
        let u = base * (1.0 / len);
        self.vertices.windows(2).all(|w| {
            let step = w[1] - w[0];
            step.norm() <= step.dot(u) * (1.0 + EPS_REL)
        })
    }

    /// Pairwise simplicity test. Consecutive segments may share their common
    /// endpoint and nothing else; all other pairs must be disjoint.
    pub fn is_simple(&self) -> SimplicityReport {
        let segs: Vec<Segment> = self.segments().collect();
        let boxes: Vec<Aabb> = segs
            .iter()
            .map(|s| {
                let b = Aabb::of_points(&[s.a, s.b]).unwrap();
                let pad = crate::abs_eps([&s.a, &s.b]);
                Aabb {
                    min: Point::new(b.min.x - pad, b.min.y - pad),
                    max: Point::new(b.max.x + pad, b.max.y + pad),
                }
            })
            .collect();
        for s in 0..segs.len() {
            for t in s + 1..segs.len() {
                if !boxes[s].intersects(&boxes[t]) {
                    continue;
                }
                let policy = if t == s + 1 {
                    TouchPolicy::IgnoreSharedEndpoint
                } else {
                    TouchPolicy::Strict
                };
                if segments_intersect(&segs[s], &segs[t], policy) {
                    return SimplicityReport {
                        simple: false,
                        offending: Some((s + 1, t + 1)),
                    };
                }
            }
        }
        SimplicityReport {
            simple: true,
            offending: None,
        }
    }

    /// Rotate by `rotation` radians about the origin, scale, then translate.
    pub fn transform(&self, rotation: f64, scale: f64, translation: Point) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return crate::error::invalid(format!("scale must be positive, got {scale}"));
        }
        let (s, c) = rotation.sin_cos();
        let vertices = self
            .vertices
            .iter()
            .map(|p| {
                Point::new(
                    scale * (c * p.x - s * p.y) + translation.x,
                    scale * (s * p.x + c * p.y) + translation.y,
                )
            })
            .collect();
        PolygonalChain::new(vertices)
    }

    /// The similarity that maps the endpoints onto `(0,0)` and `(1,0)`.
    pub fn normalized(&self) -> Result<Self> {
        let base = self.last() - self.first();
        let len = base.norm();
        if len <= self.pair_eps(0, self.len() - 1) {
            return Err(Error::ZeroBaseline);
        }
        let first = self.first();
        let (cos, sin) = (base.x / len, base.y / len);
        let mut out = PolygonalChain {
            vertices: self
                .vertices
                .iter()
                .map(|&p| {
                    let d = p - first;
                    Point::new((cos * d.x + sin * d.y) / len, (cos * d.y - sin * d.x) / len)
                })
                .collect(),
        };
        let n = out.vertices.len();
        out.vertices[0] = Point::ORIGIN;
        out.vertices[n - 1] = Point::new(1.0, 0.0);
        Ok(out)
    }

    /// 1-based inclusive vertex range as a new chain.
    pub fn subchain(&self, from: usize, to: usize) -> Result<Self> {
        if !(1 <= from && from < to && to <= self.len()) {
            return crate::error::invalid(format!(
                "subchain {from}..={to} out of range for {} vertices",
                self.len()
            ));
        }
        PolygonalChain::new(self.vertices[from - 1..to].to_vec())
    }
}
