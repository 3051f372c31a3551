//! Family JSON: conic matrices row-major, period, winding, rotation number,
//! closure defect and the normalizing affine map. Loading re-certifies the
//! pair from scratch, so a tampered closure defect or rotation number is
//! detected and replaced.

use std::path::Path;

use nalgebra::Matrix3;
use poncelet_core::{Conic, PonceletFamily};
use serde::Deserialize;

use crate::error::CliError;
use crate::output::fmt_f64;

pub fn family_to_json(family: &PonceletFamily) -> String {
    let matrix = |m: &Matrix3<f64>| {
        let mut parts = Vec::with_capacity(9);
        for r in 0..3 {
            for c in 0..3 {
                parts.push(fmt_f64(m[(r, c)]));
            }
        }
        format!("[{}]", parts.join(", "))
    };
    let phi = family.phi();
    let lin = phi.linear();
    format!(
        concat!(
            "{{\n",
            "  \"outer\": {},\n",
            "  \"inner\": {},\n",
            "  \"n\": {},\n",
            "  \"k\": {},\n",
            "  \"rho\": {},\n",
            "  \"closure_defect\": {},\n",
            "  \"angular_defect\": {},\n",
            "  \"phi\": {{\n",
            "    \"linear\": [{}, {}, {}, {}],\n",
            "    \"translation\": [{}, {}]\n",
            "  }}\n",
            "}}\n"
        ),
        matrix(family.outer().matrix()),
        matrix(family.inner().matrix()),
        family.n(),
        family.k(),
        fmt_f64(family.rho()),
        fmt_f64(family.closure_defect()),
        fmt_f64(family.angular_defect()),
        fmt_f64(lin[(0, 0)]),
        fmt_f64(lin[(0, 1)]),
        fmt_f64(lin[(1, 0)]),
        fmt_f64(lin[(1, 1)]),
        fmt_f64(phi.translation().x),
        fmt_f64(phi.translation().y),
    )
}

#[derive(Deserialize)]
#[allow(dead_code)]
struct PhiDto {
    linear: [f64; 4],
    translation: [f64; 2],
}

#[derive(Deserialize)]
struct FamilyDto {
    outer: [f64; 9],
    inner: [f64; 9],
    n: u32,
    k: u32,
    rho: f64,
    closure_defect: f64,
    #[allow(dead_code)]
    #[serde(default)]
    angular_defect: f64,
    #[allow(dead_code)]
    phi: PhiDto,
}

/// Load and re-certify a family. The stored rho / closure defect are
/// compared against freshly computed values; disagreement is reported on
/// stderr and the recomputed values win.
pub fn load_family(path: &Path) -> Result<PonceletFamily, CliError> {
    if !path.exists() {
        return Err(CliError::MissingFamily(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let dto: FamilyDto = serde_json::from_str(&text).map_err(|e| CliError::MalformedFamily {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let outer = Conic::from_matrix(Matrix3::from_row_slice(&dto.outer));
    let inner = Conic::from_matrix(Matrix3::from_row_slice(&dto.inner));
    let family = PonceletFamily::certify(outer, inner, dto.n, dto.k)?;
    if (family.rho() - dto.rho).abs() > 1e-9
        || (family.closure_defect() - dto.closure_defect).abs() > 1e-9
    {
        eprintln!(
            "note: stored certification of {} disagreed with the conics; re-certified \
             (rho {} -> {}, closure defect {} -> {})",
            path.display(),
            dto.rho,
            family.rho(),
            dto.closure_defect,
            family.closure_defect()
        );
    }
    Ok(family)
}
