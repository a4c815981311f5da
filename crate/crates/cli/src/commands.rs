use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use gesforge::construct::{ConstructionParams, Nupb, Provenance};
use gesforge::error::GesError;
use gesforge::exactverify::{chebotarev_scan, verify_instance, ChebotarevScan, ExactReport};
use gesforge::io::{parse_scale_file, scales_exact, BasisDocument, VectorsDocument, SCHEMA_VERSION, TOOL_VERSION};
use gesforge::numcert::{certify_ges_numeric, dense_rows, ges_basis, NumericCertificate};
use gesforge::{CMat64, GesBasis64};

use crate::config::{ParamArgs, RunConfig};

/// Residual and orthonormality bound for emitted bases.
pub const BASIS_TOLERANCE: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Invalid(String),
    /// Exit code 1.
    Failed(String),
}

impl From<GesError> for CliError {
    fn from(e: GesError) -> Self {
        match e {
            GesError::RankMismatch { .. } | GesError::NotHermitian(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

pub fn write_output<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn params_from_args(a: &ParamArgs) -> CliResult<ConstructionParams> {
    let dims = match (&a.dims, a.n, a.d) {
        (Some(dims), n, None) => {
            if let Some(n) = n {
                if n != dims.len() {
                    return Err(CliError::Invalid(format!("--n {n} but --dims lists {} parties", dims.len())));
                }
            }
            dims.clone()
        }
        (Some(_), _, Some(_)) => return Err(CliError::Invalid("give either --d or --dims, not both".into())),
        (None, Some(n), Some(d)) => vec![d; n],
        (None, _, _) => return Err(CliError::Invalid("need --n and --d, or --dims".into())),
    };
    let k = a.k.ok_or_else(|| CliError::Invalid("missing --k".into()))?;
    let mut params = ConstructionParams::new(dims, k, a.p);
    if let Some(path) = &a.h_file {
        params = params.with_scales(parse_scale_file(&read_text(path)?)?);
    }
    Ok(params)
}

pub fn load_instance(cfg: &RunConfig) -> CliResult<Nupb> {
    let source = cfg.source_args();
    match &source.input {
        Some(path) => {
            let doc: VectorsDocument = read_json(path)?;
            Ok(doc.to_nupb()?)
        }
        None => Ok(Nupb::standard(params_from_args(&source.params)?)?),
    }
}

/// `construct` output: the vectors document plus the run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructOutput {
    #[serde(flatten)]
    pub document: VectorsDocument,
    pub config: RunConfig,
}

pub fn construct(cfg: &RunConfig) -> CliResult<ConstructOutput> {
    let nupb = load_instance(cfg)?;
    Ok(ConstructOutput {
        document: VectorsDocument::from_nupb(&nupb),
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub dims: Vec<usize>,
    pub k: usize,
    pub p: u64,
    pub provenance: Provenance,
    pub ges_dimension: usize,
    pub maximal_ges_dimension: usize,
    pub maximal: bool,
}

impl InstanceSummary {
    fn of(nupb: &Nupb) -> Self {
        let p = &nupb.params;
        InstanceSummary {
            dims: p.dims.clone(),
            k: p.k,
            p: p.p,
            provenance: nupb.provenance,
            ges_dimension: p.ges_dimension(),
            maximal_ges_dimension: p.maximal_ges_dimension(),
            maximal: p.is_maximal(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSummary {
    pub dimension: usize,
    pub rank: usize,
    pub rank_certified: bool,
    /// `false` when the floating rank disagrees with the exact rank.
    pub rank_consistent: bool,
    pub residual: f64,
    pub orthonormality_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    pub config: RunConfig,
    pub seed: u64,
    pub instance: InstanceSummary,
    pub exact: Option<ExactReport>,
    pub exact_skipped: Option<String>,
    pub basis: BasisSummary,
    pub numeric: NumericCertificate,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn exact_failures(report: &ExactReport) -> Vec<String> {
    let mut out = Vec::new();
    if !report.rank_full {
        out.push(format!("rank_full: rank of M is {} < K = {}", report.rank_of_m, report.k));
    }
    for b in &report.bipartitions {
        let cut = format!("{:?}|{:?}", b.side, b.complement);
        if !b.count_condition {
            out.push(format!("count condition on {cut}: K < {}", b.dim_s + b.dim_sbar - 1));
        }
        for (name, v) in [("S", &b.spanning_s), ("S̄", &b.spanning_sbar)] {
            if !v.holds {
                out.push(format!(
                    "spanning property on {cut}, side {name}: {} of {} row subsets dependent, first {:?}",
                    v.failures, v.subsets_checked, v.witness
                ));
            }
        }
    }
    out
}

/// Basis with the exact rank when known; on disagreement, falls back to the
/// floating rank and records the inconsistency.
fn checked_basis(rows: &CMat64, dims: &[usize], exact_rank: Option<usize>) -> CliResult<(GesBasis64, bool)> {
    match ges_basis(rows, dims, exact_rank) {
        Ok(b) => Ok((b, true)),
        Err(GesError::RankMismatch { .. }) => Ok((ges_basis(rows, dims, None)?, false)),
        Err(e) => Err(e.into()),
    }
}

pub fn verify(cfg: &RunConfig) -> CliResult<VerifyReport> {
    let nupb = load_instance(cfg)?;
    let opts = cfg.options.clone().unwrap_or_default();
    let params = &nupb.params;
    let mut failures = Vec::new();
    let (exact, exact_skipped) = if scales_exact(params.h.as_ref()) {
        let report = verify_instance(&nupb)?;
        failures.extend(exact_failures(&report));
        (Some(report), None)
    } else {
        eprintln!("warning: floating scale factors; exact checks skipped, numeric certification only");
        (None, Some("floating scale factors have no exact representation".to_string()))
    };
    let rows: CMat64 = dense_rows(&nupb.vectors);
    let (basis, rank_consistent) = checked_basis(&rows, &params.dims, exact.as_ref().map(|e| e.rank_of_m))?;
    if !rank_consistent {
        failures.push(format!(
            "floating rank {} disagrees with exact rank {}",
            basis.rank,
            exact.as_ref().map_or(0, |e| e.rank_of_m)
        ));
    }
    if exact.is_none() && basis.rank < params.k {
        failures.push(format!("floating rank {} < K = {}", basis.rank, params.k));
    }
    if basis.residual >= BASIS_TOLERANCE || basis.orthonormality_error >= BASIS_TOLERANCE {
        failures.push(format!(
            "basis residual {:e} / orthonormality error {:e} above {BASIS_TOLERANCE:e}",
            basis.residual, basis.orthonormality_error
        ));
    }
    let numeric = certify_ges_numeric(&rows, &params.dims, &opts)?;
    for b in numeric.bipartitions.iter().filter(|b| !b.passed) {
        failures.push(format!(
            "numeric {:?}|{:?}: minimum {:e} not above threshold {:e}",
            b.side, b.complement, b.min_biproduct_value, opts.threshold
        ));
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        kind: "verify-report".into(),
        tool_version: TOOL_VERSION.into(),
        config: cfg.clone(),
        seed: opts.seed,
        instance: InstanceSummary::of(&nupb),
        passed: failures.is_empty(),
        exact,
        exact_skipped,
        basis: BasisSummary {
            dimension: basis.dim(),
            rank: basis.rank,
            rank_certified: basis.rank_certified,
            rank_consistent,
            residual: basis.residual,
            orthonormality_error: basis.orthonormality_error,
        },
        numeric,
        failures,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChebotarevReport {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    pub config: RunConfig,
    pub requested_max_size: usize,
    pub clamped: bool,
    pub scan: ChebotarevScan,
    /// No vanishing minor found.
    pub passed: bool,
}

pub fn chebotarev(cfg: &RunConfig) -> CliResult<ChebotarevReport> {
    let p = cfg.chebotarev_p.ok_or_else(|| CliError::Invalid("missing --p".into()))?;
    if p < 2 {
        return Err(CliError::Invalid(format!("--p must be at least 2, got {p}")));
    }
    let requested = cfg.max_size.unwrap_or(6);
    let clamped = requested as u64 > p;
    if clamped {
        eprintln!("warning: --max-size {requested} exceeds p = {p}; clamped to {p}");
    }
    let scan = chebotarev_scan(p, requested)?;
    Ok(ChebotarevReport {
        schema_version: SCHEMA_VERSION,
        kind: "chebotarev-report".into(),
        tool_version: TOOL_VERSION.into(),
        config: cfg.clone(),
        requested_max_size: requested,
        clamped,
        passed: scan.witnesses.is_empty(),
        scan,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisReport {
    #[serde(flatten)]
    pub document: BasisDocument,
    pub rank_consistent: bool,
    pub config: RunConfig,
    pub passed: bool,
}

pub fn basis(cfg: &RunConfig) -> CliResult<BasisReport> {
    let nupb = load_instance(cfg)?;
    let params = &nupb.params;
    let exact_rank = if scales_exact(params.h.as_ref()) {
        Some(gesforge::exactverify::rank_of_instance(&nupb)?)
    } else {
        eprintln!("warning: floating scale factors; rank computed in floating point");
        None
    };
    let rows: CMat64 = dense_rows(&nupb.vectors);
    let (basis, rank_consistent) = checked_basis(&rows, &params.dims, exact_rank)?;
    let passed = rank_consistent
        && basis.rank == params.k
        && basis.residual < BASIS_TOLERANCE
        && basis.orthonormality_error < BASIS_TOLERANCE;
    Ok(BasisReport {
        document: BasisDocument::from_basis(&basis, params.k),
        rank_consistent,
        config: cfg.clone(),
        passed,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RerunOutcome {
    pub passed: bool,
    pub verdicts_equal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    pub source: String,
    pub source_kind: String,
    pub source_tool_version: Option<String>,
    pub passed: bool,
    pub failures: Vec<String>,
    pub rerun: Option<RerunOutcome>,
}

fn verify_verdict(r: &VerifyReport) -> (bool, Vec<String>, Option<ExactReport>, Vec<bool>) {
    (
        r.passed,
        r.failures.clone(),
        r.exact.clone(),
        r.numeric.bipartitions.iter().map(|b| b.passed).collect(),
    )
}

pub fn report(path: &Path, rerun: bool) -> CliResult<Summary> {
    let value: Value = read_json(path)?;
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or_default().to_string();
    let version = value.get("schema_version").and_then(Value::as_u64);
    if version != Some(u64::from(SCHEMA_VERSION)) {
        return Err(CliError::Invalid(format!("unsupported schema version {version:?}")));
    }
    let parse = |e: serde_json::Error| CliError::Invalid(format!("{}: {e}", path.display()));
    let (passed, failures, again) = match kind.as_str() {
        "verify-report" => {
            let r: VerifyReport = serde_json::from_value(value.clone()).map_err(parse)?;
            let again = if rerun {
                let fresh = verify(&r.config)?;
                Some(RerunOutcome {
                    passed: fresh.passed,
                    verdicts_equal: verify_verdict(&fresh) == verify_verdict(&r),
                })
            } else {
                None
            };
            (r.passed, r.failures, again)
        }
        "chebotarev-report" => {
            let r: ChebotarevReport = serde_json::from_value(value.clone()).map_err(parse)?;
            let failures = r
                .scan
                .witnesses
                .iter()
                .map(|w| format!("zero minor rows {:?} cols {:?}", w.rows, w.cols))
                .collect();
            let again = if rerun {
                let fresh = chebotarev(&r.config)?;
                Some(RerunOutcome {
                    passed: fresh.passed,
                    verdicts_equal: fresh.scan == r.scan,
                })
            } else {
                None
            };
            (r.passed, failures, again)
        }
        "basis" => {
            let r: BasisReport = serde_json::from_value(value.clone()).map_err(parse)?;
            let again = if rerun {
                let fresh = basis(&r.config)?;
                Some(RerunOutcome {
                    passed: fresh.passed,
                    verdicts_equal: fresh.passed == r.passed
                        && fresh.document.dimension == r.document.dimension
                        && fresh.document.rank == r.document.rank,
                })
            } else {
                None
            };
            (r.passed, Vec::new(), again)
        }
        "vectors" => {
            let r: ConstructOutput = serde_json::from_value(value.clone()).map_err(parse)?;
            let again = if rerun {
                let fresh = construct(&r.config)?;
                Some(RerunOutcome {
                    passed: true,
                    verdicts_equal: fresh.document.exponent_table == r.document.exponent_table,
                })
            } else {
                None
            };
            (true, Vec::new(), again)
        }
        other => return Err(CliError::Invalid(format!("unknown report kind {other:?}"))),
    };
    Ok(Summary {
        schema_version: SCHEMA_VERSION,
        kind: "summary".into(),
        tool_version: TOOL_VERSION.into(),
        source: path.display().to_string(),
        source_kind: kind,
        source_tool_version: value.get("tool_version").and_then(Value::as_str).map(str::to_string),
        passed: passed && again.as_ref().is_none_or(|a| a.passed && a.verdicts_equal),
        failures,
        rerun: again,
    })
}
