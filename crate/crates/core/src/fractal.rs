//! Generalized Cesàro chains: the lower-bound families of c-chains.
//!
//! `P^0` is the unit segment. `P^{k+1}` replaces every segment `pq` of length
//! `l` by four segments through `u`, `t`, `v`, where `u` and `v` cut `pq` at
//! `(1/2 - a/c*) l` from either end and `t` is the apex of the isosceles
//! triangle over `uv` with legs `a l`, on the left of `p -> q`. With
//! `c* = (c - 2)/2` and `a = (c - 2)/(2c)` every chain of the family is a
//! simple c-chain, and the `c = 6` member is the classical Cesàro (Koch) curve.

use serde::Serialize;

use crate::bounds::lower_bound_exponent;
use crate::chain::PolygonalChain;
use crate::error::{invalid, Result};
use crate::geometry::Point;

/// Largest supported depth; `P^12` already has `4^12 + 1` vertices.
pub const MAX_DEPTH: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    /// Middle half `g_2(P^k) ∪ g_3(P^k)`, renormalized to the unit baseline.
    Refined,
    /// Construction with `c` in place of `c*`; carries no c-chain guarantee.
    ExperimentalC,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalParams {
    pub c: f64,
    pub k: u32,
    /// Apex parameter; `None` selects the largest value that keeps the family simple.
    pub a: Option<f64>,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorReport {
    pub n: usize,
    /// Common segment length `a^k`; absent when segments differ in length.
    pub segment_length: Option<f64>,
    pub total_length: f64,
    pub predicted_stretch: f64,
    pub predicted_exponent: Option<f64>,
}

impl FractalParams {
    pub fn new(c: f64, k: u32, variant: Variant) -> Self {
        FractalParams {
            c,
            k,
            a: None,
            variant,
        }
    }

    pub fn standard(c: f64, k: u32) -> Self {
        Self::new(c, k, Variant::Standard)
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = Some(a);
        self
    }

    /// Stretch of the middle three generator points: `(c - 2)/2`, or `c` for
    /// the experimental variant.
    pub fn c_star(&self) -> f64 {
        match self.variant {
            Variant::ExperimentalC => self.c,
            _ => (self.c - 2.0) / 2.0,
        }
    }

    pub fn apex_param(&self) -> f64 {
        let cs = self.c_star();
        self.a.unwrap_or(cs / (2.0 * (cs + 1.0)))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.c.is_finite() {
            return invalid("c must be finite");
        }
        match self.variant {
            Variant::Standard | Variant::Refined if self.c < 4.0 => {
                return invalid(format!("c must be at least 4, got {}", self.c));
            }
            Variant::ExperimentalC if self.c < 1.0 => {
                return invalid(format!("c must be at least 1, got {}", self.c));
            }
            _ => {}
        }
        if self.k > MAX_DEPTH {
            return invalid(format!("depth {} exceeds the limit {MAX_DEPTH}", self.k));
        }
        if self.variant == Variant::Refined && self.k == 0 {
            return invalid("the refined variant needs k >= 1");
        }
        let cs = self.c_star();
        let a = self.apex_param();
        if !(a > 0.0 && a <= cs / 2.0) {
            return invalid(format!("apex parameter {a} outside (0, {}]", cs / 2.0));
        }
        Ok(())
    }

    /// Length multiplier of one rewriting round: `1 + 2a(c* - 1)/c*`.
    fn growth(&self) -> f64 {
        let cs = self.c_star();
        1.0 + 2.0 * self.apex_param() * (cs - 1.0) / cs
    }

    fn uses_default_a(&self) -> bool {
        self.a.is_none()
    }
}

fn rewrite(params: &FractalParams) -> Vec<Point> {
    let cs = params.c_star();
    let a = params.apex_param();
    let cut = 0.5 - a / cs;
    let height = a * (cs * cs - 1.0).max(0.0).sqrt() / cs;

    let mut pts = vec![Point::ORIGIN, Point::new(1.0, 0.0)];
    for _ in 0..params.k {
        let mut next = Vec::with_capacity(4 * (pts.len() - 1) + 1);
        next.push(pts[0]);
        for w in pts.windows(2) {
            let (p, q) = (w[0], w[1]);
            let d = q - p;
            next.push(p + d * cut);
            next.push(p.lerp(q, 0.5) + d.perp() * height);
            next.push(q - d * cut);
            next.push(q);
        }
        pts = next;
    }
    pts
}

pub fn generate(params: &FractalParams) -> Result<(PolygonalChain, GeneratorReport)> {
    params.validate()?;
    let k = params.k as i32;
    let standard = PolygonalChain::new(rewrite(params))?;
    let default_a = params.uses_default_a();
    let (chain, predicted_stretch, segment_length) = match params.variant {
        Variant::Standard | Variant::ExperimentalC => {
            let seg = default_a.then(|| params.apex_param().powi(k));
            (standard, params.growth().powi(k), seg)
        }
        Variant::Refined => {
            let quarter = 4usize.pow(params.k - 1);
            let middle = standard.subchain(quarter + 1, 3 * quarter + 1)?;
            let chain = middle.normalized()?;
            // Subchains 2 and 3 are copies of P^{k-1} scaled by a over a base of 2a/c*.
            let predicted = params.c_star() * params.growth().powi(k - 1);
            let seg = default_a.then(|| {
                let cs = params.c_star();
                params.apex_param().powi(k) * cs / (2.0 * params.apex_param())
            });
            (chain, predicted, seg)
        }
    };
    let predicted_exponent = if default_a {
        match params.variant {
            Variant::ExperimentalC => Some((1.0 + params.c.log2() - (params.c + 1.0).log2()) / 2.0),
            _ => lower_bound_exponent(params.c).ok(),
        }
    } else {
        None
    };
    let report = GeneratorReport {
        n: chain.len(),
        segment_length,
        total_length: chain.chain_length(),
        predicted_stretch,
        predicted_exponent,
    };
    Ok((chain, report))
}

/// Closed-form stretch factor of `P^k`: `((2c - 4)/c)^k`.
pub fn predicted_stretch(c: f64, k: u32) -> Result<f64> {
    if !(c >= 4.0) {
        return invalid(format!("c must be at least 4, got {c}"));
    }
    Ok(((2.0 * c - 4.0) / c).powi(k as i32))
}

/// Closed-form stretch factor of the refined chain `P^k_*` with `n = 4^k/2 + 1`.
pub fn predicted_stretch_refined(c: f64, k: u32) -> Result<f64> {
    if !(c >= 4.0) || k == 0 {
        return invalid(format!("need c >= 4 and k >= 1, got c = {c}, k = {k}"));
    }
    let segments = 4f64.powi(k as i32) / 2.0;
    Ok((c * (c - 2.0) / 8.0).sqrt() * segments.powf(lower_bound_exponent(c)?))
}

/// Largest apex parameter for which the family is simple: `(c - 2)/(2c)`.
pub fn max_simple_a(c: f64) -> Result<f64> {
    if !(c >= 4.0) {
        return invalid(format!("c must be at least 4, got {c}"));
    }
    Ok((c - 2.0) / (2.0 * c))
}

/// Depth `k` of a chain with `4^k + 1` vertices.
pub fn depth_of(vertex_count: usize) -> Option<u32> {
    let segments = vertex_count.checked_sub(1)?;
    if segments == 0 || !segments.is_power_of_two() || segments.trailing_zeros() % 2 != 0 {
        return None;
    }
    Some(segments.trailing_zeros() / 2)
}

/// The `i`-th quarter (1..=4) of a depth-`k` chain, without renormalization.
pub fn subchain_slice(chain: &PolygonalChain, i: usize) -> Result<PolygonalChain> {
    let k = match depth_of(chain.len()) {
        Some(k) if k >= 1 => k,
        _ => {
            return invalid(format!(
                "{} vertices is not 4^k + 1 with k >= 1",
                chain.len()
            ))
        }
    };
    if !(1..=4).contains(&i) {
        return invalid(format!("quarter index {i} outside 1..=4"));
    }
    let quarter = 4usize.pow(k - 1);
    chain.subchain((i - 1) * quarter + 1, i * quarter + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, dist};
    use crate::Ratio;

    fn close(a: Point, b: Point, tol: f64) -> bool {
        dist(a, b) <= tol
    }

    #[test]
    fn koch_generator() {
        let (chain, report) = generate(&FractalParams::standard(6.0, 1)).unwrap();
        let h = 3f64.sqrt() / 6.0;
        let expected = [
            Point::new(0.0, 0.0),
            Point::new(1.0 / 3.0, 0.0),
            Point::new(0.5, h),
            Point::new(2.0 / 3.0, 0.0),
            Point::new(1.0, 0.0),
        ];
        assert_eq!(chain.len(), 5);
        for (p, q) in chain.vertices().iter().zip(&expected) {
            assert!(close(*p, *q, 1e-15), "{p:?} vs {q:?}");
        }
        assert_eq!(report.n, 5);
        assert!((report.segment_length.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((report.predicted_stretch - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn flat_family_at_c4() {
        let (chain, report) = generate(&FractalParams::standard(4.0, 2)).unwrap();
        assert_eq!(chain.len(), 17);
        assert!(chain.vertices().iter().all(|p| p.y == 0.0));
        assert!(chain.vertices().windows(2).all(|w| w[0].x < w[1].x));
        assert!((chain.stretch_factor().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(report.predicted_stretch, 1.0);
    }

    #[test]
    fn base_case() {
        let (chain, _) = generate(&FractalParams::standard(6.0, 0)).unwrap();
        assert_eq!(chain.vertices(), &[Point::ORIGIN, Point::new(1.0, 0.0)]);
    }

    #[test]
    fn invalid_params() {
        assert!(generate(&FractalParams::standard(3.9, 1)).is_err());
        assert!(generate(&FractalParams::standard(6.0, 13)).is_err());
        assert!(generate(&FractalParams::standard(6.0, 1).with_a(0.0)).is_err());
        assert!(generate(&FractalParams::standard(6.0, 1).with_a(1.01)).is_err());
        assert!(generate(&FractalParams::new(6.0, 0, Variant::Refined)).is_err());
        assert!(generate(&FractalParams::new(0.5, 1, Variant::ExperimentalC)).is_err());
        assert!(generate(&FractalParams::new(2.0, 2, Variant::ExperimentalC)).is_ok());
    }

    #[test]
    fn predicted_values() {
        assert!((predicted_stretch(6.0, 4).unwrap() - 256.0 / 81.0).abs() < 1e-15);
        assert!((predicted_stretch(8.0, 3).unwrap() - 3.375).abs() < 1e-15);
        assert_eq!(predicted_stretch(4.0, 7).unwrap(), 1.0);
        assert!(predicted_stretch(3.0, 1).is_err());

        assert!((predicted_stretch_refined(6.0, 2).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        assert!((predicted_stretch_refined(4.0, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!(predicted_stretch_refined(6.0, 0).is_err());

        assert!((max_simple_a(6.0).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(max_simple_a(4.0).unwrap(), 0.25);
        assert_eq!(max_simple_a(10.0).unwrap(), 0.4);
        assert!(max_simple_a(2.0).is_err());
    }

    #[test]
    fn refined_closed_form_matches_measurement() {
        for (c, k) in [(6.0, 2), (8.0, 1), (5.0, 3)] {
            let (chain, report) = generate(&FractalParams::new(c, k, Variant::Refined)).unwrap();
            assert_eq!(chain.len(), 4usize.pow(k) / 2 + 1);
            assert_eq!(chain.first(), Point::ORIGIN);
            assert_eq!(chain.last(), Point::new(1.0, 0.0));
            let measured = chain.stretch_factor().unwrap();
            let predicted = predicted_stretch_refined(c, k).unwrap();
            assert!((measured - predicted).abs() <= 1e-12 * predicted);
            assert!((report.predicted_stretch - predicted).abs() <= 1e-12 * predicted);
        }
    }

    #[test]
    fn general_apex_parameter_follows_growth_law() {
        let params = FractalParams::standard(8.0, 3).with_a(0.2);
        let (chain, report) = generate(&params).unwrap();
        let measured = chain.stretch_factor().unwrap();
        assert!((measured - report.predicted_stretch).abs() <= 1e-12 * measured);
        assert!(report.segment_length.is_none());
    }

    #[test]
    fn experimental_variant_small_depths_are_c_chains() {
        for c in [1.5, 2.0, 3.0, 6.0] {
            for k in 0..=3 {
                let (chain, report) =
                    generate(&FractalParams::new(c, k, Variant::ExperimentalC)).unwrap();
                let m = chain.min_c_bruteforce();
                assert!(m.value.within(c), "c = {c}, k = {k}: {:?}", m.value);
                let s = chain.stretch_factor().unwrap();
                assert!((s - report.predicted_stretch).abs() <= 1e-9 * s);
            }
        }
    }

    #[test]
    fn slices() {
        let (p1, _) = generate(&FractalParams::standard(6.0, 1)).unwrap();
        let s = subchain_slice(&p1, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.first(), Point::ORIGIN);
        assert!(close(s.last(), Point::new(1.0 / 3.0, 0.0), 1e-15));

        let (p2, _) = generate(&FractalParams::standard(6.0, 2)).unwrap();
        let s = subchain_slice(&p2, 2).unwrap();
        assert_eq!(s.vertices(), &p2.vertices()[4..9]);
        assert!(subchain_slice(&p2, 5).is_err());
        let odd = PolygonalChain::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        assert!(subchain_slice(&odd, 1).is_err());
    }

    #[test]
    fn quarter_is_scaled_copy_of_previous_depth() {
        // pairwise distances of the second quarter of P^2 are a times those of P^1
        let (p1, _) = generate(&FractalParams::standard(6.0, 1)).unwrap();
        let (p2, _) = generate(&FractalParams::standard(6.0, 2)).unwrap();
        let q = subchain_slice(&p2, 2).unwrap();
        let a = 1.0 / 3.0;
        for i in 0..5 {
            for j in 0..5 {
                let lhs = dist(q.vertices()[i], q.vertices()[j]);
                let rhs = a * dist(p1.vertices()[i], p1.vertices()[j]);
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hull_of_p2_is_triangle() {
        let (p2, _) = generate(&FractalParams::standard(6.0, 2)).unwrap();
        let hull = convex_hull(p2.vertices());
        assert_eq!(hull.len(), 3);
        let apex = Point::new(0.5, (1.0 / 3.0) * 3f64.sqrt() / 2.0);
        assert!((apex.y - 0.288_675_134_594_812_9).abs() < 1e-15);
        for (h, t) in hull.iter().zip([Point::ORIGIN, Point::new(1.0, 0.0), apex]) {
            assert!(close(*h, t, 1e-12));
        }
    }

    #[test]
    fn p1_min_c_is_c_star() {
        let (p1, _) = generate(&FractalParams::standard(6.0, 1)).unwrap();
        let m = p1.min_c_bruteforce();
        let w = m.witness.unwrap();
        assert_eq!((w.i, w.j, w.k), (2, 3, 4));
        assert!(matches!(m.value, Ratio::Bounded(v) if (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn depth_detection() {
        assert_eq!(depth_of(2), Some(0));
        assert_eq!(depth_of(5), Some(1));
        assert_eq!(depth_of(257), Some(4));
        assert_eq!(depth_of(9), None);
        assert_eq!(depth_of(1), None);
    }
}
