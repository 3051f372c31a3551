//! Polygons and their three mass centers: vertices, edges with uniform
//! linear density, and the homogeneous lamina (signed-area weighted, so star
//! polygons are covered).

use nalgebra::Point2;

use crate::conic::{AffineMap, Conic, Line};
use crate::error::{Error, Result};

/// Compensated (Neumaier) summation; cross terms can cancel catastrophically
/// for star polygons with near-zero signed area.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `a*b - c*d` with one fused multiply-add to absorb the rounding of `c*d`.
pub(crate) fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let cd = c * d;
    let err = c.mul_add(d, -cd);
    let diff = a.mul_add(b, -cd);
    diff - err
}

/// Which center of mass to compute.
///
/// `Vertices` averages the vertex positions, `Edges` weights edge midpoints
/// by length (uniform linear density), `Lamina` weights by the signed areas
/// of the origin triangles, which extends the solid centroid to non-embedded
/// polygons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterKind {
    Vertices,
    Edges,
    Lamina,
}

impl CenterKind {
    pub const ALL: [CenterKind; 3] = [CenterKind::Vertices, CenterKind::Edges, CenterKind::Lamina];

    /// Short label used in reports and file formats: cm0 / cm1 / cm2.
    pub fn label(&self) -> &'static str {
        match self {
            CenterKind::Vertices => "cm0",
            CenterKind::Edges => "cm1",
            CenterKind::Lamina => "cm2",
        }
    }

    pub fn parse(s: &str) -> Option<CenterKind> {
        match s {
            "cm0" => Some(CenterKind::Vertices),
            "cm1" => Some(CenterKind::Edges),
            "cm2" => Some(CenterKind::Lamina),
            _ => None,
        }
    }
}

/// An ordered cyclic list of at least three vertices. Derived quantities
/// (side lengths, cross terms, perimeter, signed area) are recomputed from
/// the vertices on demand, deterministically.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Point2<f64>>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2<f64>>) -> Result<Polygon> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices { n: vertices.len() });
        }
        Ok(Polygon { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[Point2<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2<f64> {
        self.vertices[i % self.vertices.len()]
    }

    /// Side lengths `|v_{i+1} - v_i|`, indices cyclic.
    pub fn side_lengths(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertex(i + 1) - self.vertices[i]).norm())
            .collect()
    }

    /// Cross terms `x_i y_{i+1} - x_{i+1} y_i`.
    pub fn cross_terms(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let p = self.vertices[i];
                let q = self.vertex(i + 1);
                diff_of_products(p.x, q.y, q.x, p.y)
            })
            .collect()
    }

    pub fn perimeter(&self) -> f64 {
        compensated_sum(self.side_lengths())
    }

    /// Signed area (half the cross-term sum), counted with multiplicity for
    /// self-intersecting polygons.
    pub fn signed_area(&self) -> f64 {
        0.5 * compensated_sum(self.cross_terms())
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.max((self.vertices[i] - self.vertices[j]).norm());
            }
        }
        best
    }

    /// Supporting line of edge `i` (from vertex `i` to vertex `i+1`).
    pub fn edge_line(&self, i: usize) -> Result<Line> {
        Line::through(&self.vertices[i % self.len()], &self.vertex(i + 1))
    }

    pub fn transform(&self, map: &AffineMap) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|v| map.apply(v)).collect(),
        }
    }

    /// Same polygon starting from vertex `shift`.
    pub fn rotated_start(&self, shift: usize) -> Polygon {
        let n = self.vertices.len();
        let vertices = (0..n).map(|i| self.vertices[(i + shift) % n]).collect();
        Polygon { vertices }
    }

    /// Vertices in the opposite order.
    pub fn reversed(&self) -> Polygon {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polygon { vertices }
    }
}

/// Center of mass of a polygon.
///
/// - vertices: `(1/n) Σ v_i`
/// - edges: `(1/2L) Σ ℓ_i (v_i + v_{i+1})`
/// - lamina: `(1/6A) Σ d_i (v_i + v_{i+1})`
///
/// The lamina center stays meaningful for star polygons through the signed
/// area; a vanishing denominator is refused rather than given a limit.
pub fn center_of_mass(polygon: &Polygon, kind: CenterKind) -> Result<Point2<f64>> {
    let n = polygon.len();
    match kind {
        CenterKind::Vertices => {
            let x = compensated_sum(polygon.vertices().iter().map(|v| v.x));
            let y = compensated_sum(polygon.vertices().iter().map(|v| v.y));
            Ok(Point2::new(x / n as f64, y / n as f64))
        }
        CenterKind::Edges => {
            let lengths = polygon.side_lengths();
            let total = compensated_sum(lengths.iter().copied());
            if total <= 1e-12 {
                return Err(Error::ZeroPerimeter);
            }
            let x = compensated_sum(
                (0..n).map(|i| lengths[i] * (polygon.vertices()[i].x + polygon.vertex(i + 1).x)),
            );
            let y = compensated_sum(
                (0..n).map(|i| lengths[i] * (polygon.vertices()[i].y + polygon.vertex(i + 1).y)),
            );
            Ok(Point2::new(x / (2.0 * total), y / (2.0 * total)))
        }
        CenterKind::Lamina => {
            let cross = polygon.cross_terms();
            let area = 0.5 * compensated_sum(cross.iter().copied());
            let diam = polygon.diameter();
            let threshold = 1e-12 * diam * diam;
            if area.abs() <= threshold {
                return Err(Error::ZeroSignedArea { area, threshold });
            }
            let x = compensated_sum(
                (0..n).map(|i| cross[i] * (polygon.vertices()[i].x + polygon.vertex(i + 1).x)),
            );
            let y = compensated_sum(
                (0..n).map(|i| cross[i] * (polygon.vertices()[i].y + polygon.vertex(i + 1).y)),
            );
            Ok(Point2::new(x / (6.0 * area), y / (6.0 * area)))
        }
    }
}

/// Contact polygon: vertex `i` is the tangency point of edge `i` with the
/// inscribed conic, i.e. the pole of the edge line. Keeps the vertex count
/// and winding of the input.
pub fn tangency_polygon(polygon: &Polygon, inner: &Conic) -> Result<Polygon> {
    let mut vertices = Vec::with_capacity(polygon.len());
    for i in 0..polygon.len() {
        let line = polygon.edge_line(i)?;
        let defect = inner.tangency_defect(&line);
        if defect > 1e-8 {
            return Err(Error::EdgeNotTangent { index: i, defect });
        }
        vertices.push(inner.pole_of_line(&line)?);
    }
    Polygon::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_square() -> Polygon {
        Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn right_triangle() -> Polygon {
        Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_centers_coincide() {
        let sq = unit_square();
        for kind in CenterKind::ALL {
            let c = center_of_mass(&sq, kind).unwrap();
            assert_relative_eq!(c.x, 0.5, epsilon = 1e-14);
            assert_relative_eq!(c.y, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn right_triangle_centers() {
        let tri = right_triangle();
        let c0 = center_of_mass(&tri, CenterKind::Vertices).unwrap();
        assert_relative_eq!(c0.x, 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(c0.y, 1.0 / 3.0, epsilon = 1e-14);

        let c2 = center_of_mass(&tri, CenterKind::Lamina).unwrap();
        assert_relative_eq!(c2.x, 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(c2.y, 1.0 / 3.0, epsilon = 1e-14);

        // Hand evaluation: (1 + sqrt 2) / (2 (2 + sqrt 2)) = sqrt(2)/4.
        let c1 = center_of_mass(&tri, CenterKind::Edges).unwrap();
        let expected = 2.0f64.sqrt() / 4.0;
        assert_relative_eq!(c1.x, expected, epsilon = 1e-14);
        assert_relative_eq!(c1.y, expected, epsilon = 1e-14);
        assert_relative_eq!(c1.x, 0.353_553_390_593_273_8, epsilon = 1e-12);
    }

    #[test]
    fn pentagram_centers_at_origin() {
        let vertices = (0..5)
            .map(|i| {
                let theta = 2.0 * PI * 2.0 * (i as f64) / 5.0;
                Point2::new(theta.cos(), theta.sin())
            })
            .collect();
        let star = Polygon::new(vertices).unwrap();
        // Signed area is 5/2 sin(4 pi / 5) per unit-circle cross terms: nonzero.
        let area = star.signed_area();
        assert_relative_eq!(area, 2.5 * (4.0 * PI / 5.0).sin(), epsilon = 1e-12);
        for kind in CenterKind::ALL {
            let c = center_of_mass(&star, kind).unwrap();
            assert!(c.coords.norm() < 1e-14, "{kind:?} gave {c}");
        }
    }

    #[test]
    fn zero_perimeter_refused() {
        let p = Polygon::new(vec![
            Point2::new(0.3, 0.3),
            Point2::new(0.3, 0.3),
            Point2::new(0.3, 0.3),
        ])
        .unwrap();
        assert!(matches!(
            center_of_mass(&p, CenterKind::Edges),
            Err(Error::ZeroPerimeter)
        ));
    }

    #[test]
    fn zero_signed_area_refused() {
        // Bow-tie traversal of the square has exactly cancelling cross terms.
        let p = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            center_of_mass(&p, CenterKind::Lamina),
            Err(Error::ZeroSignedArea { .. })
        ));
    }

    #[test]
    fn cyclic_and_orientation_invariance() {
        let tri = Polygon::new(vec![
            Point2::new(0.2, -0.4),
            Point2::new(1.7, 0.3),
            Point2::new(-0.3, 1.1),
        ])
        .unwrap();
        for kind in CenterKind::ALL {
            let base = center_of_mass(&tri, kind).unwrap();
            for shift in 1..3 {
                let c = center_of_mass(&tri.rotated_start(shift), kind).unwrap();
                assert!((c - base).norm() < 1e-12);
            }
        }
        // Reversal negates the area and every cross term but not the lamina center.
        let rev = tri.reversed();
        assert_relative_eq!(rev.signed_area(), -tri.signed_area(), epsilon = 1e-15);
        let c = center_of_mass(&rev, CenterKind::Lamina).unwrap();
        let base = center_of_mass(&tri, CenterKind::Lamina).unwrap();
        assert!((c - base).norm() < 1e-12);
    }

    #[test]
    fn tangency_polygon_regular_pentagon() {
        let r = (PI / 5.0).cos();
        let inner = Conic::circle(Point2::origin(), r).unwrap();
        let vertices = (0..5)
            .map(|i| {
                let theta = 2.0 * PI * (i as f64) / 5.0;
                Point2::new(theta.cos(), theta.sin())
            })
            .collect();
        let pentagon = Polygon::new(vertices).unwrap();
        let q = tangency_polygon(&pentagon, &inner).unwrap();
        assert_eq!(q.len(), 5);
        for (i, v) in q.vertices().iter().enumerate() {
            // Contact points sit at the edge-midpoint angles 36 + 72 i degrees.
            let theta = PI / 5.0 + 2.0 * PI * (i as f64) / 5.0;
            assert_relative_eq!(v.x, r * theta.cos(), epsilon = 1e-10);
            assert_relative_eq!(v.y, r * theta.sin(), epsilon = 1e-10);
            assert!(inner.evaluate(v).abs() < 1e-9);
        }
    }

    #[test]
    fn tangency_polygon_regular_pentagram() {
        let r = (2.0 * PI / 5.0).cos();
        let inner = Conic::circle(Point2::origin(), r).unwrap();
        let vertices = (0..5)
            .map(|i| {
                let theta = 2.0 * PI * 2.0 * (i as f64) / 5.0;
                Point2::new(theta.cos(), theta.sin())
            })
            .collect();
        let star = Polygon::new(vertices).unwrap();
        let q = tangency_polygon(&star, &inner).unwrap();
        // Contact points sit on the inner circle at the chord midpoints.
        for (i, v) in q.vertices().iter().enumerate() {
            assert_relative_eq!(v.coords.norm(), r, epsilon = 1e-10);
            let theta = 2.0 * PI * (2.0 * i as f64 + 1.0) / 5.0;
            assert_relative_eq!(v.x, r * theta.cos(), epsilon = 1e-10);
            assert_relative_eq!(v.y, r * theta.sin(), epsilon = 1e-10);
        }
    }

    #[test]
    fn tangency_polygon_rejects_non_tangent_edges() {
        let inner = Conic::circle(Point2::origin(), 0.2).unwrap();
        let sq = unit_square();
        let err = tangency_polygon(&sq, &inner).unwrap_err();
        assert!(matches!(err, Error::EdgeNotTangent { .. }));
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(values.iter().copied()), 2.0);
    }
}
