//! Geometry kernel for Poncelet polygon families between nested ellipses.
//!
//! The crate builds periodic tangent-line families between two nested
//! conics, computes three notions of polygon center of mass, and certifies
//! numerically that the vertex and lamina centroid loci are circles in the
//! frame where the outer conic is the unit circle (hence ellipses homothetic
//! to the outer conic in the original frame), that the edge-density centroid
//! fails this, that the contact-polygon centroid is stationary for homothetic
//! pairs (Weill's point), and that the contact polygon is itself a Poncelet
//! family for the polar-dual conic.
//!
//! Default tolerances assume unit-scale conics; everything is relative to
//! the outer conic's semi-major axis.

pub mod centers;
pub mod conic;
pub mod dynamics;
pub mod error;
pub mod locus;

pub use centers::{center_of_mass, tangency_polygon, CenterKind, Polygon};
pub use conic::{
    is_unit_circle, matrix_distance, normalize_to_unit_circle, polar_dual, AffineMap, Conic,
    ConicKind, EllipseParams, Line,
};
pub use dynamics::{
    find_periodic_family, initial_flag, max_closure_defect, measure_of_arc, orbit_polygon,
    poncelet_step, rotation_number, sigma, tangent_length, tau, EllipseTemplate, Flag,
    FreeParameter, PonceletFamily,
};
pub use error::{Error, Result};
pub use locus::{
    fit_circle, sample_locus, verify_dual_contact, verify_locus_circle, verify_measure_invariance,
    verify_porism, verify_weill_point, CircleFit, DualContactCheck, LocusCircleCheck, LocusSample,
    VerificationReport, WeillCheck, WorldEllipse,
};
