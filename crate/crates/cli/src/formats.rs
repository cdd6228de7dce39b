//! JSON wire formats: Thurston-Veech data, surface build reports,
//! saddle-connection dumps, catalogs, bounds reports and verify reports.
//!
//! Scalars serialize as exact-rational strings when exact and as decimal
//! interval strings otherwise; never bare floats.

use anyhow::{anyhow, Result};
use flatlatt_core::catalog::VerifyReport;
use flatlatt_core::combinat::{CylinderDiagram, Permutation};
use flatlatt_core::construct::{BuildOutput, ParabolicPair, TVData, TwistVector};
use flatlatt_core::geom::{Direction, RectangleSurface, SaddleConnection};
use flatlatt_core::numeric::Precision;
use flatlatt_core::sweep::{BuildDiagnostic, Catalog, CatalogEntry, CompareReport, CompareVerdict};
use flatlatt_core::Scalar;
use serde::{Deserialize, Serialize};

pub fn scalar_string(s: &Scalar, prec: &Precision) -> String {
    s.to_display_string(prec)
}

/// `{"l":3,"r":[2,1,3],"u":[3,2,1],"nh":[1,2],"nv":[1,2]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TVDataJson {
    pub l: u64,
    pub r: Vec<u64>,
    pub u: Vec<u64>,
    pub nh: Vec<u64>,
    pub nv: Vec<u64>,
}

impl TVDataJson {
    pub fn from_tv(tv: &TVData) -> Self {
        TVDataJson {
            l: tv.diagram.l as u64,
            r: tv.diagram.sigma_right.one_based(),
            u: tv.diagram.sigma_up.one_based(),
            nh: tv.n_horizontal.entries().to_vec(),
            nv: tv.n_vertical.entries().to_vec(),
        }
    }

    pub fn into_tv(self) -> Result<TVData> {
        if self.r.len() != self.l as usize || self.u.len() != self.l as usize {
            return Err(anyhow!(
                "permutation arrays must have length l = {}",
                self.l
            ));
        }
        let d = CylinderDiagram::new(
            Permutation::from_one_based(&self.r).map_err(|e| anyhow!("{e}"))?,
            Permutation::from_one_based(&self.u).map_err(|e| anyhow!("{e}"))?,
        )
        .map_err(|e| anyhow!("{e}"))?;
        TVData::new(
            d,
            TwistVector::new(self.nh).map_err(|e| anyhow!("{e}"))?,
            TwistVector::new(self.nv).map_err(|e| anyhow!("{e}"))?,
        )
        .map_err(|e| anyhow!("{e}"))
    }
}

/// Parse a TVData JSON document; malformed input reports line and column.
pub fn parse_tvdata(text: &str) -> Result<TVData> {
    let json: TVDataJson = serde_json::from_str(text)
        .map_err(|e| anyhow!("malformed TVData JSON at line {}, column {}: {e}", e.line(), e.column()))?;
    json.into_tv()
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderJson {
    pub rectangles: Vec<u64>,
    pub height: String,
    pub circumference: String,
    pub inverse_modulus: String,
    pub area: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub diagram: String,
    pub widths_by_column_cycle: Vec<String>,
    pub heights_by_row_cycle: Vec<String>,
    pub genus: u64,
    pub profile: Vec<u64>,
    pub gamma: u64,
    pub area: String,
    pub exact: bool,
    pub e1: Vec<Vec<String>>,
    pub e2: Vec<Vec<String>>,
    pub eigenvalue: String,
    pub horizontal_cylinders: Vec<CylinderJson>,
    pub vertical_cylinders: Vec<CylinderJson>,
    pub horizontal_twists: Option<Vec<u64>>,
    pub vertical_twists: Option<Vec<u64>>,
    pub horizontal_shear: Option<String>,
    pub vertical_shear: Option<String>,
}

pub fn build_report(out: &BuildOutput, pg: Option<&ParabolicPair>, prec: &Precision) -> BuildReport {
    let s = &out.surface;
    let cyl = |dir: Direction| -> Vec<CylinderJson> {
        s.cylinders(dir)
            .into_iter()
            .map(|c| CylinderJson {
                rectangles: c.cycle.iter().map(|&k| k as u64 + 1).collect(),
                height: scalar_string(&c.height, prec),
                circumference: scalar_string(&c.circumference, prec),
                inverse_modulus: scalar_string(&c.inverse_modulus, prec),
                area: scalar_string(&c.area, prec),
            })
            .collect()
    };
    let matrix = |m: &flatlatt_core::numeric::NonnegIntMatrix| -> Vec<Vec<String>> {
        (0..m.dim())
            .map(|i| (0..m.dim()).map(|j| m.entry(i, j).to_string()).collect())
            .collect()
    };
    BuildReport {
        diagram: flatlatt_core::combinat::format_diagram(s.diagram()),
        widths_by_column_cycle: s
            .widths_by_vcycle()
            .iter()
            .map(|w| scalar_string(w, prec))
            .collect(),
        heights_by_row_cycle: s
            .heights_by_hcycle()
            .iter()
            .map(|h| scalar_string(h, prec))
            .collect(),
        genus: s.genus(),
        profile: s.profile().multipliers.clone(),
        gamma: s.gamma(),
        area: scalar_string(&s.area(), prec),
        exact: out.exact,
        e1: matrix(&out.e1),
        e2: matrix(&out.e2),
        eigenvalue: scalar_string(&out.eigenvalue, prec),
        horizontal_cylinders: cyl(Direction::Horizontal),
        vertical_cylinders: cyl(Direction::Vertical),
        horizontal_twists: s.twist_vector(Direction::Horizontal),
        vertical_twists: s.twist_vector(Direction::Vertical),
        horizontal_shear: pg.map(|p| scalar_string(&p.horizontal_shear, prec)),
        vertical_shear: pg.map(|p| scalar_string(&p.vertical_shear, prec)),
    }
}

/// One saddle connection as a JSON line:
/// `{"hol":["1/2","0"],"from":0,"to":1,"len2":"1/4"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionLine {
    pub hol: [String; 2],
    pub from: u64,
    pub to: u64,
    pub len2: String,
}

pub fn connection_line(c: &SaddleConnection, prec: &Precision) -> ConnectionLine {
    ConnectionLine {
        hol: [
            scalar_string(&c.hol_x, prec),
            scalar_string(&c.hol_y, prec),
        ],
        from: c.from_class as u64,
        to: c.to_class as u64,
        len2: scalar_string(&c.len2(), prec),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntryJson {
    #[serde(flatten)]
    pub tv: TVDataJson,
    pub genus: u64,
    pub profile: Vec<u64>,
    pub gamma: u64,
    pub beta: String,
    pub beta_certified: bool,
    pub alpha_lo: String,
    pub alpha_hi: String,
    pub alpha_exact: Option<String>,
    pub exact: bool,
    pub fingerprint: String,
    pub unit: [u64; 2],
    pub twist_index: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticJson {
    pub unit: [u64; 2],
    pub twist_index: u64,
    pub tv: Option<TVDataJson>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogConfigJson {
    pub beta: String,
    pub scan_length: String,
    pub prune: String,
    pub slack: String,
    pub cap_mode: String,
    pub precision_cap: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareJson {
    pub catalog_count: u64,
    pub cap_stated: Option<String>,
    pub cap_stated_error: Option<String>,
    pub cap_safe: String,
    pub verdict: String,
    pub finding: Option<String>,
}

/// Versioned catalog file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogJson {
    pub version: u32,
    pub config: CatalogConfigJson,
    pub completed_units: Vec<[u64; 2]>,
    pub entries: Vec<CatalogEntryJson>,
    pub diagnostics: Vec<DiagnosticJson>,
    pub compare: Option<CompareJson>,
}

pub fn entry_json(e: &CatalogEntry, prec: &Precision) -> CatalogEntryJson {
    CatalogEntryJson {
        tv: TVDataJson::from_tv(&e.tv),
        genus: e.genus,
        profile: e.profile.multipliers.clone(),
        gamma: e.gamma,
        beta: scalar_string(&e.beta_value, prec),
        beta_certified: e.beta_certified,
        alpha_lo: scalar_string(&e.alpha_lo, prec),
        alpha_hi: scalar_string(&e.alpha_hi, prec),
        alpha_exact: e.alpha_exact.as_ref().map(|a| scalar_string(a, prec)),
        exact: e.exact,
        fingerprint: e.fingerprint.clone(),
        unit: [e.unit.0, e.unit.1],
        twist_index: e.twist_index,
    }
}

pub fn diagnostic_json(d: &BuildDiagnostic) -> DiagnosticJson {
    DiagnosticJson {
        unit: [d.unit.0, d.unit.1],
        twist_index: d.twist_index,
        tv: d.tv.as_ref().map(TVDataJson::from_tv),
        message: d.message.clone(),
    }
}

pub fn compare_json(r: &CompareReport) -> CompareJson {
    CompareJson {
        catalog_count: r.catalog_count,
        cap_stated: r.cap_stated.as_ref().ok().cloned(),
        cap_stated_error: r.cap_stated.as_ref().err().cloned(),
        cap_safe: r.cap_safe.clone(),
        verdict: match r.verdict {
            CompareVerdict::PassStated => "pass-stated".into(),
            CompareVerdict::PassSafe => "pass-safe".into(),
            CompareVerdict::Fail => "fail".into(),
        },
        finding: r.finding.clone(),
    }
}

pub fn catalog_json(
    catalog: &Catalog,
    config: CatalogConfigJson,
    compare: Option<&CompareReport>,
    prec: &Precision,
) -> CatalogJson {
    CatalogJson {
        version: 1,
        config,
        completed_units: catalog.completed_units.iter().map(|&(a, b)| [a, b]).collect(),
        entries: catalog.entries.iter().map(|e| entry_json(e, prec)).collect(),
        diagnostics: catalog.diagnostics.iter().map(diagnostic_json).collect(),
        compare: compare.map(compare_json),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyJson {
    pub surface: String,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

pub fn verify_json(r: &VerifyReport) -> VerifyJson {
    VerifyJson {
        surface: r.surface.clone(),
        passed: r.passed(),
        checks: r
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.clone(),
                passed: c.passed,
                detail: c.detail.clone(),
            })
            .collect(),
    }
}

/// Bounds report: every value carries both variant strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsValueJson {
    pub name: String,
    pub stated: Option<String>,
    pub stated_error: Option<String>,
    pub safe: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsJson {
    pub inputs: Vec<[String; 2]>,
    pub values: Vec<BoundsValueJson>,
}

/// Serialize a RectangleSurface standalone (used by the spectrum command
/// header and tests).
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceSummary {
    pub genus: u64,
    pub profile: Vec<u64>,
    pub gamma: u64,
    pub rectangle_count: u64,
}

pub fn surface_summary(s: &RectangleSurface) -> SurfaceSummary {
    SurfaceSummary {
        genus: s.genus(),
        profile: s.profile().multipliers.clone(),
        gamma: s.gamma(),
        rectangle_count: s.len() as u64,
    }
}
