//! Conics as symmetric 3×3 quadratic forms, plus lines, tangency, polarity,
//! duality and affine normalization.
//!
//! A point `p = (x, y)` lies on the conic when `(x, y, 1) M (x, y, 1)ᵀ = 0`.
//! Matrices are scaled to unit Frobenius norm with the sign fixed so that
//! interior points of an ellipse evaluate negative; this makes equality
//! checks and the duality involution well-posed.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix3, Point2, Vector2, Vector3};

use crate::error::{Error, Result};

/// How a symmetric form classifies over the reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Ellipse,
    Degenerate,
    NonEllipse,
}

/// Center / semi-axes / tilt of a real ellipse, with `a >= b > 0` and
/// `tilt` canonicalized to `(-pi/2, pi/2]` (zero for circles).
#[derive(Debug, Clone, Copy)]
pub struct EllipseParams {
    pub center: Point2<f64>,
    pub semi_axes: (f64, f64),
    pub tilt: f64,
}

impl EllipseParams {
    /// Boundary point at parametric angle `theta`.
    pub fn point_at(&self, theta: f64) -> Point2<f64> {
        let (a, b) = self.semi_axes;
        let (st, ct) = self.tilt.sin_cos();
        let (x, y) = (a * theta.cos(), b * theta.sin());
        Point2::new(
            self.center.x + ct * x - st * y,
            self.center.y + st * x + ct * y,
        )
    }

    /// Semi-major over semi-minor.
    pub fn axis_ratio(&self) -> f64 {
        self.semi_axes.0 / self.semi_axes.1
    }

    pub fn is_circle(&self, rel_tol: f64) -> bool {
        let (a, b) = self.semi_axes;
        (a - b).abs() <= rel_tol * a
    }
}

/// A projective conic stored as a normalized symmetric matrix, with cached
/// ellipse parameters when the form is a real ellipse.
#[derive(Debug, Clone, Copy)]
pub struct Conic {
    matrix: Matrix3<f64>,
    kind: ConicKind,
    ellipse: Option<EllipseParams>,
}

fn adjugate3(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, c0: usize, r1: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    // adj(M) = cofactor matrix transposed; for symmetric M it is symmetric.
    Matrix3::new(
        c(1, 1, 2, 2),
        c(0, 2, 2, 1),
        c(0, 1, 1, 2),
        c(1, 2, 2, 0),
        c(0, 0, 2, 2),
        c(0, 2, 1, 0),
        c(1, 0, 2, 1),
        c(0, 1, 2, 0),
        c(0, 0, 1, 1),
    )
}

fn canonical_tilt(mut t: f64) -> f64 {
    while t > FRAC_PI_2 {
        t -= PI;
    }
    while t <= -FRAC_PI_2 {
        t += PI;
    }
    t
}

impl Conic {
    /// Build an ellipse from center, semi-axes `(a, b)` and tilt (radians).
    ///
    /// Axes are reordered so the stored semi-major comes first; the tilt is
    /// adjusted accordingly and canonicalized.
    pub fn from_ellipse(center: Point2<f64>, semi_axes: (f64, f64), tilt: f64) -> Result<Conic> {
        let (mut a, mut b) = semi_axes;
        if a <= 0.0 || b <= 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(Error::NonPositiveAxis { a, b });
        }
        let mut tilt = tilt;
        if a < b {
            std::mem::swap(&mut a, &mut b);
            tilt += FRAC_PI_2;
        }
        let tilt = if (a - b).abs() <= 1e-15 * a {
            0.0
        } else {
            canonical_tilt(tilt)
        };

        let (st, ct) = tilt.sin_cos();
        let rot = Matrix2::new(ct, -st, st, ct);
        let diag = Matrix2::new(1.0 / (a * a), 0.0, 0.0, 1.0 / (b * b));
        let quad = rot * diag * rot.transpose();
        let c = center.coords;
        let qc = quad * c;
        let m = Matrix3::new(
            quad[(0, 0)],
            quad[(0, 1)],
            -qc.x,
            quad[(1, 0)],
            quad[(1, 1)],
            -qc.y,
            -qc.x,
            -qc.y,
            c.dot(&qc) - 1.0,
        );
        // Interior (the center) already evaluates to -1, so scaling by the
        // positive Frobenius norm keeps the sign convention.
        let matrix = m / m.norm();
        Ok(Conic {
            matrix,
            kind: ConicKind::Ellipse,
            ellipse: Some(EllipseParams {
                center,
                semi_axes: (a, b),
                tilt,
            }),
        })
    }

    /// Circle of radius `r` centered at `center`.
    pub fn circle(center: Point2<f64>, r: f64) -> Result<Conic> {
        Conic::from_ellipse(center, (r, r), 0.0)
    }

    /// The unit circle at the origin.
    pub fn unit_circle() -> Conic {
        Conic::circle(Point2::origin(), 1.0).expect("unit circle is a valid ellipse")
    }

    /// Classify and normalize an arbitrary symmetric form.
    ///
    /// The input is symmetrized, scaled to unit Frobenius norm and sign-fixed
    /// (interior-negative for ellipses, largest entry positive otherwise).
    pub fn from_matrix(m: Matrix3<f64>) -> Conic {
        let m = (m + m.transpose()) * 0.5;
        let norm = m.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Conic {
                matrix: Matrix3::zeros(),
                kind: ConicKind::Degenerate,
                ellipse: None,
            };
        }
        let mut m = m / norm;
        let det3 = m.determinant();
        let det2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];

        if det3.abs() <= 1e-12 {
            fix_sign(&mut m);
            return Conic {
                matrix: m,
                kind: ConicKind::Degenerate,
                ellipse: None,
            };
        }
        if det2 <= 1e-12 {
            fix_sign(&mut m);
            return Conic {
                matrix: m,
                kind: ConicKind::NonEllipse,
                ellipse: None,
            };
        }
        // Ellipse-type: make the 2x2 block positive definite.
        if m[(0, 0)] + m[(1, 1)] < 0.0 {
            m = -m;
        }
        match extract_params(&m) {
            Some(params) => Conic {
                matrix: m,
                kind: ConicKind::Ellipse,
                ellipse: Some(params),
            },
            // Positive definite 3x3 form: an imaginary ellipse.
            None => Conic {
                matrix: m,
                kind: ConicKind::NonEllipse,
                ellipse: None,
            },
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> ConicKind {
        self.kind
    }

    pub fn is_ellipse(&self) -> bool {
        self.kind == ConicKind::Ellipse
    }

    /// Cached ellipse parameters; errors for non-ellipses.
    pub fn params(&self) -> Result<&EllipseParams> {
        self.ellipse.as_ref().ok_or(Error::NotAnEllipse)
    }

    /// Quadratic form value at an affine point, under the stored
    /// normalization. Zero iff the point is on the conic; negative inside a
    /// (sign-normalized) ellipse, positive outside.
    pub fn evaluate(&self, p: &Point2<f64>) -> f64 {
        let m = &self.matrix;
        let (x, y) = (p.x, p.y);
        m[(0, 0)] * x * x
            + m[(1, 1)] * y * y
            + 2.0 * m[(0, 1)] * x * y
            + 2.0 * m[(0, 2)] * x
            + 2.0 * m[(1, 2)] * y
            + m[(2, 2)]
    }

    /// Adjugate matrix scaled to unit Frobenius norm (the dual form: a line
    /// `l` is tangent iff `l adj(M) lᵀ = 0`).
    pub fn dual_matrix(&self) -> Matrix3<f64> {
        let adj = adjugate3(&self.matrix);
        adj / adj.norm()
    }

    /// Absolute dual-form value of a normalized line; zero iff tangent.
    pub fn tangency_defect(&self, line: &Line) -> f64 {
        let d = self.dual_matrix();
        let l = line.coeffs();
        (l.transpose() * d * l)[(0, 0)].abs()
    }

    /// Polar line of a point (for a point on the conic: the tangent there).
    pub fn polar_line(&self, p: &Point2<f64>) -> Result<Line> {
        let l = self.matrix * Vector3::new(p.x, p.y, 1.0);
        Line::from_coeffs(l)
    }

    /// Pole of a line: the homogeneous point `adj(M) l`, dehomogenized.
    /// For a tangent line this is the contact point.
    pub fn pole_of_line(&self, line: &Line) -> Result<Point2<f64>> {
        if !self.is_ellipse() {
            return Err(Error::NotAnEllipse);
        }
        let q = adjugate3(&self.matrix) * line.coeffs();
        let q = q / q.norm();
        if q.z.abs() < 1e-12 {
            return Err(Error::PointAtInfinity { w: q.z });
        }
        Ok(Point2::new(q.x / q.z, q.y / q.z))
    }

    /// Tangent lines through `p`: two for an exterior point, one for a point
    /// on the conic, none for an interior point.
    ///
    /// The pencil of lines through `p` meets the dual conic in a quadratic;
    /// a discriminant in `[-1e-12, 0]` is clamped to tangency.
    pub fn tangent_lines_from_point(&self, p: &Point2<f64>) -> Result<Vec<Line>> {
        if !self.is_ellipse() {
            return Err(Error::NotAnEllipse);
        }
        let dual = self.dual_matrix();
        // Basis of the pencil through p: vertical and horizontal lines.
        let lv = Vector3::new(1.0, 0.0, -p.x);
        let lh = Vector3::new(0.0, 1.0, -p.y);
        let a = (lv.transpose() * dual * lv)[(0, 0)];
        let b = (lv.transpose() * dual * lh)[(0, 0)];
        let c = (lh.transpose() * dual * lh)[(0, 0)];

        let disc = b * b - a * c;
        const DISC_EPS: f64 = 1e-12;
        if disc < -DISC_EPS {
            return Ok(Vec::new());
        }
        let sq = disc.max(0.0).sqrt();

        // Roots of a alpha^2 + 2 b alpha beta + c beta^2 = 0 as (alpha : beta),
        // picking for each root the algebraic form with the larger magnitude.
        let root = |n1: f64, d1: f64, n2: f64, d2: f64| -> (f64, f64) {
            if n1 * n1 + d1 * d1 >= n2 * n2 + d2 * d2 {
                (n1, d1)
            } else {
                (n2, d2)
            }
        };
        let mut pairs = vec![root(-b + sq, a, c, -b - sq)];
        if disc > DISC_EPS {
            pairs.push(root(-b - sq, a, c, -b + sq));
        }

        let mut lines = Vec::with_capacity(pairs.len());
        for (alpha, beta) in pairs {
            lines.push(Line::from_coeffs(alpha * lv + beta * lh)?);
        }
        Ok(lines)
    }

    /// Second intersection of a line through a point `p` on the conic.
    ///
    /// Uses Vieta's root sum to divide out the known root, so the result
    /// degrades gracefully to `p` itself when the line is tangent at `p`.
    pub fn other_intersection(&self, p: &Point2<f64>, line: &Line) -> Result<Point2<f64>> {
        let value = self.evaluate(p);
        if value.abs() >= 1e-8 {
            return Err(Error::NotOnConic {
                x: p.x,
                y: p.y,
                value,
            });
        }
        let d = line.direction();
        let m = &self.matrix;
        let dh = Vector3::new(d.x, d.y, 0.0);
        let ph = Vector3::new(p.x, p.y, 1.0);
        let a = (dh.transpose() * m * dh)[(0, 0)];
        let b = 2.0 * (ph.transpose() * m * dh)[(0, 0)];
        let c0 = value;

        // Known root ~ 0; the other root is -b/a minus the residual root.
        let mut t1 = -b / a;
        if t1.abs() > 1e-12 {
            let t0 = c0 / (a * t1);
            t1 = -b / a - t0;
        }
        Ok(Point2::new(p.x + t1 * d.x, p.y + t1 * d.y))
    }
}

fn fix_sign(m: &mut Matrix3<f64>) {
    let mut best = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            if m[(i, j)].abs() > best.abs() {
                best = m[(i, j)];
            }
        }
    }
    if best < 0.0 {
        *m = -*m;
    }
}

fn extract_params(m: &Matrix3<f64>) -> Option<EllipseParams> {
    let quad = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let b = Vector2::new(m[(0, 2)], m[(1, 2)]);
    let inv = quad.try_inverse()?;
    let center = -(inv * b);
    // Form value at the center is c - bᵀ A⁻¹ b =: -s; real ellipse needs s > 0.
    let s = b.dot(&(inv * b)) - m[(2, 2)];
    if s <= 0.0 {
        return None;
    }
    let eig = nalgebra::SymmetricEigen::new(quad);
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let (lmin, lmax, vmin) = if l0 <= l1 {
        (l0, l1, eig.eigenvectors.column(0).into_owned())
    } else {
        (l1, l0, eig.eigenvectors.column(1).into_owned())
    };
    if lmin <= 0.0 {
        return None;
    }
    let a = (s / lmin).sqrt();
    let bax = (s / lmax).sqrt();
    let tilt = if lmax - lmin <= 1e-12 * lmax {
        0.0
    } else {
        canonical_tilt(vmin.y.atan2(vmin.x))
    };
    Some(EllipseParams {
        center: Point2::from(center),
        semi_axes: (a, bax),
        tilt,
    })
}

/// Frobenius distance between two normalized conic matrices.
pub fn matrix_distance(a: &Conic, b: &Conic) -> f64 {
    let d1 = (a.matrix - b.matrix).norm();
    let d2 = (a.matrix + b.matrix).norm();
    d1.min(d2)
}

/// Polar dual of `of` with respect to `wrt`: the conic `wrt of⁻¹ wrt`.
///
/// Its tangent lines are exactly the `wrt`-polars of points of `of`;
/// applying the operation twice (with the same `wrt`) returns `of`.
pub fn polar_dual(of: &Conic, wrt: &Conic) -> Result<Conic> {
    let det = of.matrix.determinant();
    let inv = of
        .matrix
        .try_inverse()
        .ok_or(Error::SingularConic { det })?;
    Ok(Conic::from_matrix(wrt.matrix * inv * wrt.matrix))
}

/// A real affine line `l1 x + l2 y + l3 = 0`, normalized so the affine part
/// `(l1, l2)` is a unit vector with a canonical sign.
#[derive(Debug, Clone, Copy)]
pub struct Line {
    coeffs: Vector3<f64>,
}

impl Line {
    pub fn from_coeffs(raw: Vector3<f64>) -> Result<Line> {
        let norm = raw.x.hypot(raw.y);
        if norm < 1e-14 || !norm.is_finite() {
            return Err(Error::DegenerateLine);
        }
        let mut coeffs = raw / norm;
        let lead = if coeffs.x.abs() >= coeffs.y.abs() {
            coeffs.x
        } else {
            coeffs.y
        };
        if lead < 0.0 {
            coeffs = -coeffs;
        }
        Ok(Line { coeffs })
    }

    /// Line through two distinct points.
    pub fn through(p: &Point2<f64>, q: &Point2<f64>) -> Result<Line> {
        let a = Vector3::new(p.x, p.y, 1.0);
        let b = Vector3::new(q.x, q.y, 1.0);
        Line::from_coeffs(a.cross(&b))
    }

    pub fn coeffs(&self) -> Vector3<f64> {
        self.coeffs
    }

    /// Signed distance from a point (the normal is unit length).
    pub fn eval(&self, p: &Point2<f64>) -> f64 {
        self.coeffs.x * p.x + self.coeffs.y * p.y + self.coeffs.z
    }

    /// Unit direction vector along the line.
    pub fn direction(&self) -> Vector2<f64> {
        Vector2::new(-self.coeffs.y, self.coeffs.x)
    }

    /// Distance between two lines as projective objects (sign-insensitive).
    pub fn distance_to(&self, other: &Line) -> f64 {
        let d1 = (self.coeffs - other.coeffs).norm();
        let d2 = (self.coeffs + other.coeffs).norm();
        d1.min(d2)
    }
}

/// An invertible affine map `x -> L x + t`.
#[derive(Debug, Clone, Copy)]
pub struct AffineMap {
    linear: Matrix2<f64>,
    translation: Vector2<f64>,
}

impl AffineMap {
    pub fn new(linear: Matrix2<f64>, translation: Vector2<f64>) -> Result<AffineMap> {
        let det = linear.determinant();
        if det.abs() <= 1e-12 {
            return Err(Error::SingularMap { det });
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    pub fn identity() -> AffineMap {
        AffineMap {
            linear: Matrix2::identity(),
            translation: Vector2::zeros(),
        }
    }

    pub fn linear(&self) -> &Matrix2<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &Vector2<f64> {
        &self.translation
    }

    pub fn apply(&self, p: &Point2<f64>) -> Point2<f64> {
        Point2::from(self.linear * p.coords + self.translation)
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let det = self.linear.determinant();
        let inv = self
            .linear
            .try_inverse()
            .ok_or(Error::SingularMap { det })?;
        AffineMap::new(inv, -(inv * self.translation))
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn compose(&self, first: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear * first.linear,
            translation: self.linear * first.translation + self.translation,
        }
    }

    /// Homogeneous 3×3 matrix of the map.
    pub fn homogeneous(&self) -> Matrix3<f64> {
        let l = &self.linear;
        let t = &self.translation;
        Matrix3::new(
            l[(0, 0)],
            l[(0, 1)],
            t.x,
            l[(1, 0)],
            l[(1, 1)],
            t.y,
            0.0,
            0.0,
            1.0,
        )
    }

    /// Image conic: points transform by the map, the matrix by `H⁻ᵀ M H⁻¹`.
    pub fn push_forward(&self, conic: &Conic) -> Result<Conic> {
        let hinv = self.inverse()?.homogeneous();
        Ok(Conic::from_matrix(hinv.transpose() * conic.matrix * hinv))
    }

    /// Image line under the point map (`l -> H⁻ᵀ l`).
    pub fn map_line(&self, line: &Line) -> Result<Line> {
        let hinv = self.inverse()?.homogeneous();
        Line::from_coeffs(hinv.transpose() * line.coeffs())
    }
}

/// Affine map taking `outer` to the unit circle at the origin (translate to
/// the center, rotate by minus the tilt, scale the axes), together with the
/// image of `inner` under that map.
pub fn normalize_to_unit_circle(outer: &Conic, inner: &Conic) -> Result<(AffineMap, Conic)> {
    let params = outer.params()?;
    let (a, b) = params.semi_axes;
    let (st, ct) = params.tilt.sin_cos();
    let rot = Matrix2::new(ct, st, -st, ct);
    let scale = Matrix2::new(1.0 / a, 0.0, 0.0, 1.0 / b);
    let linear = scale * rot;
    let phi = AffineMap::new(linear, -(linear * params.center.coords))?;
    let inner_image = phi.push_forward(inner)?;
    Ok((phi, inner_image))
}

/// True when the conic is the unit circle at the origin (within `tol`).
pub fn is_unit_circle(conic: &Conic, tol: f64) -> bool {
    match conic.params() {
        Ok(p) => {
            p.center.coords.norm() <= tol
                && (p.semi_axes.0 - 1.0).abs() <= tol
                && (p.semi_axes.1 - 1.0).abs() <= tol
        }
        Err(_) => false,
    }
}
