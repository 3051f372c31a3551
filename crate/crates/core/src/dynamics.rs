//! The Poncelet map as a real circle map: tangent-line dynamics between two
//! nested ellipses, rotation numbers via the lifted angle, Bertrand's
//! invariant measure for circle pairs, and a solver that tunes one free
//! parameter of the inner conic until the map is (n, k)-periodic.
//!
//! All dynamics run in the normalized frame where the outer conic is the
//! unit circle; results are mapped back through the normalizing affine map.

use std::f64::consts::TAU;

use nalgebra::Point2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centers::Polygon;
use crate::conic::{is_unit_circle, normalize_to_unit_circle, AffineMap, Conic, Line};
use crate::error::{Error, Result};

/// A vertex on the outer conic together with the tangent line along which it
/// was reached (absent for a starting flag). `lifted_angle` is a continuous
/// lift of the vertex angle in the normalized frame; it increases
/// monotonically along an orbit.
#[derive(Debug, Clone, Copy)]
pub struct Flag {
    pub vertex: Point2<f64>,
    pub incoming: Option<Line>,
    pub lifted_angle: f64,
}

/// Reflection along the current tangent line: the other intersection of the
/// line with the outer conic. An involution.
pub fn sigma(outer: &Conic, vertex: &Point2<f64>, line: &Line) -> Result<Point2<f64>> {
    outer.other_intersection(vertex, line)
}

/// Switch to the other tangent line of the inner conic through the vertex.
/// An involution.
pub fn tau(inner: &Conic, vertex: &Point2<f64>, line: &Line) -> Result<Line> {
    let tangents = inner.tangent_lines_from_point(vertex)?;
    if tangents.len() != 2 {
        return Err(Error::VertexInsideInner {
            x: vertex.x,
            y: vertex.y,
        });
    }
    let other = tangents
        .into_iter()
        .max_by(|a, b| {
            a.distance_to(line)
                .partial_cmp(&b.distance_to(line))
                .unwrap()
        })
        .unwrap();
    Ok(other)
}

/// Stepper in the normalized frame: the outer conic is the exact unit
/// circle, so iterated vertices can be snapped back onto it.
#[derive(Debug, Clone)]
struct Engine {
    outer: Conic,
    inner: Conic,
}

fn angle_of(p: &Point2<f64>) -> f64 {
    p.y.atan2(p.x)
}

fn ccw_delta(from: &Point2<f64>, to: &Point2<f64>) -> f64 {
    (angle_of(to) - angle_of(from)).rem_euclid(TAU)
}

impl Engine {
    fn new(inner_normalized: Conic) -> Engine {
        Engine {
            outer: Conic::unit_circle(),
            inner: inner_normalized,
        }
    }

    fn initial_flag(&self, t: f64) -> Result<Flag> {
        let vertex = Point2::new(t.cos(), t.sin());
        if self.inner.evaluate(&vertex) <= 0.0 {
            return Err(Error::VertexInsideInner {
                x: vertex.x,
                y: vertex.y,
            });
        }
        Ok(Flag {
            vertex,
            incoming: None,
            lifted_angle: t,
        })
    }

    fn step(&self, flag: &Flag) -> Result<Flag> {
        let v = flag.vertex;
        if self.inner.evaluate(&v) <= 0.0 {
            return Err(Error::VertexInsideInner { x: v.x, y: v.y });
        }
        let out_line = match &flag.incoming {
            Some(line) => tau(&self.inner, &v, line)?,
            // A starting flag picks the tangent that advances the least in
            // the counterclockwise direction; afterwards the "other line"
            // rule of tau keeps the orientation without per-step angle
            // comparisons.
            None => {
                let tangents = self.inner.tangent_lines_from_point(&v)?;
                if tangents.len() != 2 {
                    return Err(Error::VertexInsideInner { x: v.x, y: v.y });
                }
                let mut best: Option<(f64, Line)> = None;
                for line in tangents {
                    let w = sigma(&self.outer, &v, &line)?;
                    let delta = ccw_delta(&v, &w);
                    if best.as_ref().is_none_or(|(d, _)| delta < *d) {
                        best = Some((delta, line));
                    }
                }
                best.unwrap().1
            }
        };
        let w = sigma(&self.outer, &v, &out_line)?;
        // The outer conic is the exact unit circle here; keep iterates on it.
        let w = Point2::from(w.coords / w.coords.norm());
        let delta = ccw_delta(&v, &w);
        Ok(Flag {
            vertex: w,
            incoming: Some(out_line),
            lifted_angle: flag.lifted_angle + delta,
        })
    }

    /// Final lifted angle after `steps` steps from angle `t0`.
    fn lift_after(&self, t0: f64, steps: usize) -> Result<f64> {
        let mut flag = self.initial_flag(t0)?;
        for _ in 0..steps {
            flag = self.step(&flag)?;
        }
        Ok(flag.lifted_angle)
    }

    /// First `n` vertices from angle `t`, the chordal closure defect of the
    /// implicit n-th step, and the total lifted-angle gain over n steps.
    fn polygon_with_defect(&self, t: f64, n: u32) -> Result<(Polygon, f64, f64)> {
        let mut flag = self.initial_flag(t)?;
        let start = flag.vertex;
        let mut vertices = Vec::with_capacity(n as usize);
        for _ in 0..n {
            vertices.push(flag.vertex);
            flag = self.step(&flag)?;
        }
        let chordal = (flag.vertex - start).norm();
        let gain = flag.lifted_angle - t;
        Ok((Polygon::new(vertices)?, chordal, gain))
    }
}

/// One step of the Poncelet map on a flag: switch to the other tangent line
/// at the vertex (a starting flag picks the counterclockwise-advancing one),
/// then move to its other intersection with the outer conic.
pub fn poncelet_step(outer: &Conic, inner: &Conic, flag: &Flag) -> Result<Flag> {
    if is_unit_circle(outer, 1e-12) {
        return Engine::new(*inner).step(flag);
    }
    let (phi, inner_n) = normalize_to_unit_circle(outer, inner)?;
    let engine = Engine::new(inner_n);
    let mapped = Flag {
        vertex: phi.apply(&flag.vertex),
        incoming: match &flag.incoming {
            Some(line) => Some(phi.map_line(line)?),
            None => None,
        },
        lifted_angle: flag.lifted_angle,
    };
    let next = engine.step(&mapped)?;
    let phi_inv = phi.inverse()?;
    Ok(Flag {
        vertex: phi_inv.apply(&next.vertex),
        incoming: match &next.incoming {
            Some(line) => Some(phi_inv.map_line(line)?),
            None => None,
        },
        lifted_angle: next.lifted_angle,
    })
}

/// Starting flag on `outer` at normalized-frame angle `t`.
pub fn initial_flag(outer: &Conic, inner: &Conic, t: f64) -> Result<Flag> {
    if is_unit_circle(outer, 1e-12) {
        return Engine::new(*inner).initial_flag(t);
    }
    let (phi, inner_n) = normalize_to_unit_circle(outer, inner)?;
    let flag = Engine::new(inner_n).initial_flag(t)?;
    Ok(Flag {
        vertex: phi.inverse()?.apply(&flag.vertex),
        incoming: None,
        lifted_angle: flag.lifted_angle,
    })
}

/// Birkhoff rotation number: lifted-angle gain per step over `iterations`
/// steps, divided by a full turn. Deterministic for fixed inputs.
pub fn rotation_number(outer: &Conic, inner: &Conic, iterations: usize) -> Result<f64> {
    let (_, inner_n) = normalize_to_unit_circle(outer, inner)?;
    let engine = Engine::new(inner_n);
    let gain = engine.lift_after(0.0, iterations)? - 0.0;
    Ok(gain / (TAU * iterations as f64))
}

/// Length of the tangent segment from an exterior point to a circle.
pub fn tangent_length(circle: &Conic, p: &Point2<f64>) -> Result<f64> {
    let params = circle.params()?;
    let (a, b) = params.semi_axes;
    let deviation = (a - b).abs() / a;
    if deviation > 1e-9 {
        return Err(Error::NotACircle { deviation });
    }
    let r = 0.5 * (a + b);
    let d2 = (p - params.center).norm_squared() - r * r;
    if d2 < -1e-12 {
        return Err(Error::InteriorPoint { x: p.x, y: p.y });
    }
    Ok(d2.max(0.0).sqrt())
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure {
            tol,
            err: err.abs(),
        });
    }
    Ok(
        adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}

/// Invariant-measure length of the arc `[theta1, theta2]` of the unit
/// circle: the integral of `d theta / F(theta)` where `F` is the tangent
/// length from the circle point to the inner circle. Adaptive quadrature to
/// absolute tolerance 1e-12.
///
/// Requires the normalized frame (outer = unit circle) and a circular inner
/// conic; Bertrand's argument supplies no closed measure for ellipse pairs.
pub fn measure_of_arc(outer: &Conic, inner: &Conic, theta1: f64, theta2: f64) -> Result<f64> {
    if !is_unit_circle(outer, 1e-9) {
        return Err(Error::NotUnitCircle);
    }
    let params = inner.params()?;
    let (a, b) = params.semi_axes;
    let deviation = (a - b).abs() / a;
    if deviation > 1e-9 {
        return Err(Error::NotACircle { deviation });
    }
    let r = 0.5 * (a + b);
    let center = params.center;
    if center.coords.norm() + r >= 1.0 {
        return Err(Error::Degenerate {
            reason: "inner circle is not strictly inside the unit circle".into(),
        });
    }
    let integrand = move |theta: f64| {
        let p = Point2::new(theta.cos(), theta.sin());
        1.0 / ((p - center).norm_squared() - r * r).sqrt()
    };
    let fa = integrand(theta1);
    let fm = integrand(0.5 * (theta1 + theta2));
    let fb = integrand(theta2);
    let whole = simpson(fa, fm, fb, theta2 - theta1);
    adaptive_simpson(&integrand, theta1, theta2, fa, fm, fb, whole, 1e-12, 60)
}

/// A certified (n, k)-periodic pair: every starting point on the outer conic
/// closes up after `n` steps, winding `k` times.
#[derive(Debug, Clone)]
pub struct PonceletFamily {
    outer: Conic,
    inner: Conic,
    n: u32,
    k: u32,
    rho: f64,
    closure_defect: f64,
    angular_defect: f64,
    phi: AffineMap,
    inner_normalized: Conic,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

impl PonceletFamily {
    /// Check the porism invariants for a fixed pair of conics and package
    /// the result. The rotation number and closure defect are recomputed
    /// here, never trusted from the caller.
    pub fn certify(outer: Conic, inner: Conic, n: u32, k: u32) -> Result<PonceletFamily> {
        if n < 3 {
            return Err(Error::InvalidFamily {
                reason: format!("period n = {n} must be at least 3"),
            });
        }
        if k == 0 || 2 * k >= n {
            return Err(Error::InvalidFamily {
                reason: format!("winding k = {k} must satisfy 1 <= k < n/2 for n = {n}"),
            });
        }
        if gcd(n, k) != 1 {
            return Err(Error::InvalidFamily {
                reason: format!("n = {n} and k = {k} must be coprime"),
            });
        }
        let inner_params = *inner.params()?;
        for i in 0..256 {
            let q = inner_params.point_at(TAU * (i as f64) / 256.0);
            if outer.evaluate(&q) >= 0.0 {
                return Err(Error::InvalidFamily {
                    reason: "inner conic is not strictly nested inside the outer".into(),
                });
            }
        }
        let (phi, inner_normalized) = normalize_to_unit_circle(&outer, &inner)?;
        let engine = Engine::new(inner_normalized);
        let (_, chordal, gain) = engine.polygon_with_defect(0.0, n)?;
        let angular = gain - TAU * k as f64;
        if chordal >= 1e-8 {
            return Err(Error::InvalidFamily {
                reason: format!("closure defect {chordal:.3e} exceeds 1e-8"),
            });
        }
        // A whole number of n-blocks, so a periodic orbit contributes no
        // partial-block bias to the Birkhoff average.
        let blocks = (1024 / n as usize).max(64);
        let iters = blocks * n as usize;
        let rho = engine.lift_after(0.0, iters)? / (TAU * iters as f64);
        if (rho - k as f64 / n as f64).abs() >= 1e-10 {
            return Err(Error::InvalidFamily {
                reason: format!("rotation number {rho} is not {k}/{n} within 1e-10"),
            });
        }
        Ok(PonceletFamily {
            outer,
            inner,
            n,
            k,
            rho,
            closure_defect: chordal,
            angular_defect: angular,
            phi,
            inner_normalized,
        })
    }

    pub fn outer(&self) -> &Conic {
        &self.outer
    }

    pub fn inner(&self) -> &Conic {
        &self.inner
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn closure_defect(&self) -> f64 {
        self.closure_defect
    }

    pub fn angular_defect(&self) -> f64 {
        self.angular_defect
    }

    /// Affine map taking the outer conic to the unit circle.
    pub fn phi(&self) -> &AffineMap {
        &self.phi
    }

    /// The inner conic in the normalized frame.
    pub fn inner_normalized(&self) -> &Conic {
        &self.inner_normalized
    }

    fn engine(&self) -> Engine {
        Engine::new(self.inner_normalized)
    }

    /// Family polygon at parameter `t` in the normalized frame.
    pub fn normalized_polygon(&self, t: f64) -> Result<Polygon> {
        let (polygon, _, _) = self.engine().polygon_with_defect(t, self.n)?;
        Ok(polygon)
    }

    /// Family polygon at parameter `t` with vertices on the outer conic.
    pub fn orbit_polygon(&self, t: f64) -> Result<Polygon> {
        let normalized = self.normalized_polygon(t)?;
        Ok(normalized.transform(&self.phi.inverse()?))
    }

    /// Chordal distance between the start vertex and its n-th image, in the
    /// normalized frame.
    pub fn closure_defect_at(&self, t: f64) -> Result<f64> {
        let (_, chordal, _) = self.engine().polygon_with_defect(t, self.n)?;
        Ok(chordal)
    }

    /// Lifted-angle gain over the n steps starting at `t`.
    pub fn lifted_gain_at(&self, t: f64) -> Result<f64> {
        let (_, _, gain) = self.engine().polygon_with_defect(t, self.n)?;
        Ok(gain)
    }
}

/// n vertices obtained from the start vertex at lifted angle `t`; the
/// implicit n-th step returns to the start within the family's closure
/// defect. Vertices are in the original (world) frame.
pub fn orbit_polygon(family: &PonceletFamily, t: f64) -> Result<Polygon> {
    family.orbit_polygon(t)
}

/// Worst chordal closure defect over seeded random starting angles.
pub fn max_closure_defect(family: &PonceletFamily, starts: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..starts {
        let t: f64 = rng.gen::<f64>() * TAU;
        worst = worst.max(family.closure_defect_at(t)?);
    }
    Ok(worst)
}

/// Which parameter of an [`EllipseTemplate`] the solver adjusts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParameter {
    /// Scale both semi-axes, preserving their ratio; the parameter is the
    /// semi-major axis.
    Radius,
    /// Slide the center along +x from the base center; the parameter is the
    /// offset distance.
    CenterOffset,
}

/// Inner-conic template with one free parameter.
#[derive(Debug, Clone, Copy)]
pub struct EllipseTemplate {
    pub center: Point2<f64>,
    pub semi_axes: (f64, f64),
    pub tilt: f64,
    pub free: FreeParameter,
}

impl EllipseTemplate {
    pub fn instantiate(&self, value: f64) -> Result<Conic> {
        match self.free {
            FreeParameter::Radius => {
                let ratio = self.semi_axes.1 / self.semi_axes.0;
                Conic::from_ellipse(self.center, (value, value * ratio), self.tilt)
            }
            FreeParameter::CenterOffset => Conic::from_ellipse(
                Point2::new(self.center.x + value, self.center.y),
                self.semi_axes,
                self.tilt,
            ),
        }
    }
}

/// Distance from a point to the boundary of an ellipse, by parametric scan
/// plus golden-section refinement. Accurate enough for solver brackets.
fn distance_to_boundary(conic: &Conic, p: &Point2<f64>) -> Result<f64> {
    let params = *conic.params()?;
    let dist = |theta: f64| (params.point_at(theta) - p).norm();
    let samples = 256;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..samples {
        let d = dist(TAU * (i as f64) / samples as f64);
        if d < best {
            best = d;
            best_i = i;
        }
    }
    let mut lo = TAU * ((best_i as f64) - 1.0) / samples as f64;
    let mut hi = TAU * ((best_i as f64) + 1.0) / samples as f64;
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let (mut f1, mut f2) = (dist(x1), dist(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = dist(x2);
        }
    }
    Ok(dist(0.5 * (lo + hi)).min(best))
}

fn nested_strictly(outer: &Conic, inner: &Conic) -> Result<bool> {
    let params = *inner.params()?;
    for i in 0..128 {
        let q = params.point_at(TAU * (i as f64) / 128.0);
        if outer.evaluate(&q) >= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Signed angular closure defect of the n-step lift starting at angle 0.
///
/// For a map conjugate to a rotation this has the sign of `rho - k/n` for
/// every start, so it doubles as the bisection predicate on the rotation
/// number.
fn angular_defect(outer: &Conic, inner: &Conic, n: u32, k: u32) -> Result<f64> {
    let (_, inner_n) = normalize_to_unit_circle(outer, inner)?;
    let engine = Engine::new(inner_n);
    let gain = engine.lift_after(0.0, n as usize)?;
    Ok(gain - TAU * k as f64)
}

/// Find the member of a one-parameter template family that is
/// (n, k)-periodic between the conics.
///
/// A 32-point scan of the bracket must show exactly one sign change of the
/// defect; bisection then pins the rotation number to `k/n` within 1e-10 and
/// an Illinois-damped secant polishes the angular closure defect below
/// 1e-12. The returned family is re-certified from scratch.
pub fn find_periodic_family(
    outer: &Conic,
    template: &EllipseTemplate,
    n: u32,
    k: u32,
) -> Result<PonceletFamily> {
    if !outer.is_ellipse() {
        return Err(Error::NotAnEllipse);
    }
    let (lo, hi) = bracket_interval(outer, template)?;
    let defect = |param: f64| -> Result<f64> {
        let inner = template.instantiate(param)?;
        if !nested_strictly(outer, &inner)? {
            return Err(Error::Degenerate {
                reason: format!("template at parameter {param} is not nested"),
            });
        }
        angular_defect(outer, &inner, n, k)
    };

    // Scan for a single sign change.
    let scan = 32;
    let mut previous: Option<(f64, f64)> = None;
    let mut change: Option<((f64, f64), (f64, f64))> = None;
    let mut changes = 0;
    for i in 0..scan {
        let x = lo + (hi - lo) * (i as f64) / (scan - 1) as f64;
        let g = defect(x)?;
        if g == 0.0 {
            change = Some(((x, g), (x, g)));
            changes += 1;
        } else if let Some((px, pg)) = previous {
            if pg.signum() != g.signum() {
                changes += 1;
                change = Some(((px, pg), (x, g)));
            }
        }
        previous = Some((x, g));
    }
    if changes == 0 {
        return Err(Error::NoBracket {
            reason: format!(
                "defect for (n, k) = ({n}, {k}) has constant sign over [{lo:.6}, {hi:.6}]"
            ),
        });
    }
    if changes > 1 {
        return Err(Error::NoBracket {
            reason: format!("defect changes sign {changes} times over [{lo:.6}, {hi:.6}]"),
        });
    }
    let ((mut a, mut fa), (mut b, mut fb)) = change.unwrap();

    // Bisection until the n-step rotation estimate is within 1e-10 of k/n.
    let rho_tol = TAU * n as f64 * 1e-10;
    let mut mid = 0.5 * (a + b);
    let mut fmid = defect(mid)?;
    for _ in 0..200 {
        if fmid.abs() < rho_tol || (b - a).abs() < 1e-15 {
            break;
        }
        if fa.signum() == fmid.signum() {
            a = mid;
            fa = fmid;
        } else {
            b = mid;
            fb = fmid;
        }
        mid = 0.5 * (a + b);
        fmid = defect(mid)?;
    }
    if fa.signum() == fmid.signum() {
        a = mid;
        fa = fmid;
    } else {
        b = mid;
        fb = fmid;
    }

    // Illinois secant polish of the angular defect.
    let mut best = (mid, fmid);
    let mut side = 0i32;
    for _ in 0..200 {
        if best.1.abs() < 1e-12 {
            break;
        }
        let mut x = b - fb * (b - a) / (fb - fa);
        if !x.is_finite() || x <= a.min(b) || x >= a.max(b) {
            x = 0.5 * (a + b);
        }
        let fx = defect(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            break;
        }
        if fa.signum() != fx.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < 1e-16 * (1.0 + a.abs()) {
            break;
        }
    }
    if best.1.abs() >= 1e-12 {
        return Err(Error::Degenerate {
            reason: format!("closure polish stalled at angular defect {:.3e}", best.1),
        });
    }

    let inner = template.instantiate(best.0)?;
    let (_, inner_n) = normalize_to_unit_circle(outer, &inner)?;
    let clearance = normalized_clearance(&inner_n)?;
    if clearance < 1e-6 {
        return Err(Error::Degenerate {
            reason: format!("solved inner conic touches the outer (clearance {clearance:.3e})"),
        });
    }
    PonceletFamily::certify(*outer, inner, n, k)
}

/// Smallest gap between the normalized inner conic and the unit circle.
fn normalized_clearance(inner_normalized: &Conic) -> Result<f64> {
    let params = *inner_normalized.params()?;
    let mut clearance = f64::INFINITY;
    for i in 0..512 {
        let q = params.point_at(TAU * (i as f64) / 512.0);
        clearance = clearance.min(1.0 - q.coords.norm());
    }
    Ok(clearance)
}

fn bracket_interval(outer: &Conic, template: &EllipseTemplate) -> Result<(f64, f64)> {
    match template.free {
        FreeParameter::Radius => {
            let clearance = distance_to_boundary(outer, &template.center)?;
            let lo = 0.05;
            let hi = 0.95 * clearance;
            if hi <= lo {
                return Err(Error::NoBracket {
                    reason: format!(
                        "radius bracket [{lo}, {hi:.6}] is empty (clearance {clearance:.6})"
                    ),
                });
            }
            Ok((lo, hi))
        }
        FreeParameter::CenterOffset => {
            let outer_minor = outer.params()?.semi_axes.1;
            let inner_major = template.semi_axes.0.max(template.semi_axes.1);
            let hi = 0.95 * (outer_minor - inner_major);
            if hi <= 0.0 {
                return Err(Error::NoBracket {
                    reason: format!(
                        "offset bracket [0, {hi:.6}] is empty (outer minor {outer_minor:.6}, inner major {inner_major:.6})"
                    ),
                });
            }
            Ok((0.0, hi))
        }
    }
}
