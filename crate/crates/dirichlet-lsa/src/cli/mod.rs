//! Command implementations behind the thin binary: classification reports,
//! Diophantine tables, root CSV export, Newton refinement and SVG plots.

pub mod csvio;
pub mod specfile;
pub mod svg;

use crate::dioph::{DioStream, DiophError, Quality, Sda, StreamConfig};
use crate::dirichlet::{classify, dimension_bounds, lsa_constant, Classification, DirichletError};
use crate::lsa::{
    lattice_approximation, refine_roots, stability_radius, stable_roots, LsaError, Radius,
};
use crate::numerics::{format as numfmt, BigRational, HpReal, Rounding};
use crate::roots::{
    oscillatory_period, solve_sparse, to_sparse_poly, RootsError, RootSet,
};
use num_traits::ToPrimitive;
use specfile::{PolynomialSpec, SpecError};
use std::fmt;

const N: Rounding = Rounding::Nearest;

/// Failure modes with the exit codes the binary maps them to:
/// 1 for numeric failures, 2 for input errors.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DirichletError> for CliError {
    fn from(e: DirichletError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DiophError> for CliError {
    fn from(e: DiophError) -> Self {
        match e {
            DiophError::Stalled(_) | DiophError::IndeterminateMargin => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<RootsError> for CliError {
    fn from(e: RootsError) -> Self {
        match e {
            RootsError::Nonconvergence { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LsaError> for CliError {
    fn from(e: LsaError) -> Self {
        match e {
            LsaError::Roots(RootsError::Nonconvergence { .. }) => CliError::Numeric(e.to_string()),
            LsaError::Dioph(d) => d.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Output format selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    TextTable,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            "text-table" => Ok(OutputFormat::TextTable),
            other => Err(format!("unknown format `{other}` (csv, svg, text-table)")),
        }
    }
}

/// Job parameters shared by the commands.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub precision: u32,
    pub epsilon: BigRational,
    pub delta0: BigRational,
    pub n_steps: u32,
    pub max_degree: u64,
    pub strip_height: Option<BigRational>,
    pub format: OutputFormat,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            precision: crate::numerics::DEFAULT_PRECISION,
            epsilon: BigRational::new(1.into(), 10.into()),
            delta0: BigRational::new(99.into(), 100.into()),
            n_steps: 99,
            max_degree: 5000,
            strip_height: None,
            format: OutputFormat::TextTable,
        }
    }
}

impl JobConfig {
    fn tolerance(&self) -> HpReal {
        HpReal::from_mantissa_exp(
            1.into(),
            -((self.precision / 2) as i64),
            self.precision,
            N,
        )
    }

    fn epsilon_hp(&self) -> HpReal {
        HpReal::from_rational(&self.epsilon, self.precision, N)
    }
}

/// One row of the Diophantine table.
struct DioRow {
    sda: Sda,
    period: HpReal,
    radius: Radius,
}

/// `classify`: one line per field.
pub fn cmd_classify(spec: &PolynomialSpec, precision: u32) -> Result<String, CliError> {
    let f = &spec.poly;
    let mut out = String::new();
    let classification = match classify(f) {
        Ok(c) => c,
        Err(DirichletError::UndecidableRank) if f.alphas().iter().any(|a| !a.is_rational()) => {
            // Nonlattice for sure, but the rank needs a decidable exponent
            // family: report what is known.
            out.push_str("kind = nonlattice\n");
            out.push_str("rank = undecidable (declare decimal flags or use a decidable family)\n");
            out.push_str("generic = unknown\n");
            append_bounds(&mut out, spec, precision);
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    match classification {
        Classification::Lattice { generator, q, k } => {
            out.push_str("kind = lattice\n");
            let gen_text = if q == 1.into() {
                format!("{}", generator.base)
            } else {
                format!("({})^(1/{q})", generator.base)
            };
            out.push_str(&format!("generator = {gen_text}\n"));
            out.push_str(&format!("q = {q}\n"));
            let ks: Vec<String> = k.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("k = ({})\n", ks.join(",")));
            let p = oscillatory_period(f.base_ratio(), q.to_u64().unwrap_or(1), precision);
            out.push_str(&format!("oscillatory_period = {}\n", numfmt::to_decimal_string(&p, 6)));
        }
        Classification::Nonlattice { rank, generic } => {
            out.push_str("kind = nonlattice\n");
            out.push_str(&format!("rank = {rank}\n"));
            out.push_str(&format!("generic = {generic}\n"));
        }
    }
    append_bounds(&mut out, spec, precision);
    Ok(out)
}

fn append_bounds(out: &mut String, spec: &PolynomialSpec, precision: u32) {
    let f = &spec.poly;
    let bounds = dimension_bounds(f, precision.min(192));
    out.push_str(&format!("D_lower = {}\n", numfmt::to_decimal_string(&bounds.d_lower, 6)));
    out.push_str(&format!("D = {}\n", numfmt::to_decimal_string(&bounds.d, 6)));
    let c = lsa_constant(f, precision.min(192));
    out.push_str(&format!("C = {}\n", numfmt::to_decimal_string(&c, 6)));
    if let Some(zeta) = &spec.zeta {
        out.push_str(&format!("single_gap = {}\n", zeta.single_gap));
        out.push_str(&format!("length = {}\n", zeta.length));
        let gaps: Vec<String> = zeta
            .gaps
            .iter()
            .map(|(g, m)| if *m == 1 { g.to_string() } else { format!("{g} x{m}") })
            .collect();
        out.push_str(&format!("gaps = {}\n", gaps.join(", ")));
    }
}

/// Runs the approximation stream, keeping rows until the degree cap.
fn collect_sdas(spec: &PolynomialSpec, cfg: &JobConfig) -> Result<Vec<Sda>, CliError> {
    if classify(&spec.poly)?.is_lattice() {
        return Err(CliError::Input("lattice: exact, no approximation needed".into()));
    }
    let tail = &spec.poly.alphas()[1..];
    let stream_cfg =
        StreamConfig::new(cfg.delta0.clone(), cfg.n_steps).map_err(CliError::from)?;
    let mut stream = DioStream::new(tail, &stream_cfg, cfg.precision.min(192))?;
    let mut rows = Vec::new();
    let mut first_excess: Option<BigRationalDegree> = None;
    while let Some(sda) = stream.next_sda()? {
        let k_n = sda.k.last().cloned().unwrap_or_else(|| sda.q.clone());
        let degree = k_n.to_u64().unwrap_or(u64::MAX);
        if degree > cfg.max_degree {
            if first_excess.is_none() {
                first_excess = Some(BigRationalDegree(degree));
            }
            break;
        }
        rows.push(sda);
        if rows.len() >= 200 {
            break;
        }
    }
    if rows.is_empty() {
        let note = first_excess
            .map(|d| format!("first approximation already has k_N = {} above the cap", d.0))
            .unwrap_or_else(|| "stream produced no approximations".into());
        return Err(CliError::Input(format!(
            "degree cap {} admits no lattice approximation: {note}",
            cfg.max_degree
        )));
    }
    Ok(rows)
}

struct BigRationalDegree(u64);

/// `dio`: the approximation table, rows of decreasing quality.
pub fn cmd_dio(spec: &PolynomialSpec, cfg: &JobConfig) -> Result<String, CliError> {
    let f = &spec.poly;
    let mut sdas = collect_sdas(spec, cfg)?;
    // Successive delta steps can re-emit the same vector; the table keeps
    // one row per (q, k).
    let mut seen: Vec<(crate::numerics::BigInt, Vec<crate::numerics::BigInt>)> = Vec::new();
    sdas.retain(|s| {
        let key = (s.q.clone(), s.k.clone());
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
    let eps = cfg.epsilon_hp();
    let mut rows: Vec<DioRow> = Vec::with_capacity(sdas.len());
    for sda in sdas {
        let q = sda.q.to_u64().unwrap_or(u64::MAX);
        let period = oscillatory_period(f.base_ratio(), q, cfg.precision.min(192));
        let region = stability_radius(f, &sda, &eps, cfg.precision.min(192))?;
        rows.push(DioRow { sda, period, radius: region.radius });
    }
    rows.sort_by(|a, b| {
        b.sda
            .quality
            .partial_cmp(&a.sda.quality)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sep = if cfg.format == OutputFormat::Csv { "," } else { "  " };
    let mut out = String::new();
    if cfg.format == OutputFormat::Csv {
        out.push_str("Q,q_k,p_q,radius\n");
    } else {
        out.push_str(&format!(
            "{:<12}{sep}{:<28}{sep}{:<12}{sep}radius\n",
            "Q", "(q,k)", "p_q"
        ));
    }
    for row in &rows {
        let q_text = match &row.sda.quality {
            Quality::Finite(q) => numfmt::to_decimal_string(q, 6),
            Quality::Infinite => "inf".into(),
        };
        let mut tuple = vec![row.sda.q.to_string()];
        tuple.extend(row.sda.k.iter().map(|k| k.to_string()));
        let tuple = format!("({})", tuple.join(","));
        let p_text = numfmt::to_decimal_string(&row.period, 6);
        let radius_text = match &row.radius {
            Radius::Finite(r) => {
                let base = numfmt::to_decimal_string(r, 6);
                if *r < row.period {
                    format!("{base} < p_{}", row.sda.q)
                } else {
                    base
                }
            }
            Radius::Infinite => "inf".into(),
        };
        if cfg.format == OutputFormat::Csv {
            out.push_str(&format!("{q_text},\"{tuple}\",{p_text},{radius_text}\n"));
        } else {
            out.push_str(&format!("{q_text:<12}{sep}{tuple:<28}{sep}{p_text:<12}{sep}{radius_text}\n"));
        }
    }
    Ok(out)
}

/// Picks the most stable admissible approximation under the degree cap.
fn best_admissible(spec: &PolynomialSpec, cfg: &JobConfig) -> Result<Sda, CliError> {
    let rows = collect_sdas(spec, cfg)?;
    Ok(rows
        .into_iter()
        .max_by(|a, b| {
            a.quality
                .partial_cmp(&b.quality)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("collect_sdas guarantees at least one row"))
}

/// Shared solve-and-map pipeline; returns the mapped roots and the q used.
fn lattice_roots_pipeline(
    spec: &PolynomialSpec,
    cfg: &JobConfig,
) -> Result<(RootSet, u64, Option<crate::lsa::LatticeApproximation>), CliError> {
    let f = &spec.poly;
    let tol = cfg.tolerance();
    if classify(f)?.is_lattice() {
        let (sparse, generator) = to_sparse_poly(f)?;
        if sparse.degree() > cfg.max_degree {
            return Err(CliError::Input(format!(
                "degree cap {} exceeded by k_N = {}",
                cfg.max_degree,
                sparse.degree()
            )));
        }
        let q = generator.root.to_u64().unwrap_or(1);
        let period = oscillatory_period(f.base_ratio(), q, cfg.precision);
        let strip = strip_height(cfg, &period);
        let zroots = solve_sparse(&sparse, &tol, cfg.precision)?;
        let mapped = crate::roots::roots_to_dimensions(&zroots, &generator, &strip)?;
        Ok((mapped, q, None))
    } else {
        let sda = best_admissible(spec, cfg)?;
        let approx = lattice_approximation(f, &sda, cfg.precision)?;
        let q = approx.generator.root.to_u64().unwrap_or(1);
        let strip = strip_height(cfg, &approx.period);
        let zroots = solve_sparse(&approx.sparse, &tol, cfg.precision)?;
        let mapped = crate::roots::roots_to_dimensions(&zroots, &approx.generator, &strip)?;
        Ok((mapped, q, Some(approx)))
    }
}

fn strip_height(cfg: &JobConfig, period: &HpReal) -> HpReal {
    match &cfg.strip_height {
        Some(h) => HpReal::from_rational(h, cfg.precision, N),
        None => period.clone(),
    }
}

/// `roots`: CSV of the s-plane roots of the chosen lattice approximation.
pub fn cmd_roots(spec: &PolynomialSpec, cfg: &JobConfig) -> Result<String, CliError> {
    let (mapped, q, _) = lattice_roots_pipeline(spec, cfg)?;
    Ok(csvio::write_roots_csv(&mapped, q))
}

/// `refine`: Newton-refined true roots seeded from the stable roots, as CSV
/// plus a one-line summary.
pub fn cmd_refine(spec: &PolynomialSpec, cfg: &JobConfig) -> Result<(String, String), CliError> {
    let f = &spec.poly;
    let tol_refine = cfg.tolerance();
    if classify(f)?.is_lattice() {
        // Exact case: the polynomial's own roots are fixed points.
        let (mapped, q, _) = lattice_roots_pipeline(spec, cfg)?;
        let report = refine_roots(f, &mapped, &tol_refine, 100)?;
        let csv = csvio::write_refined_csv(&report.roots, q);
        let summary = format!(
            "seeds {} converged {} failed {} distinct roots {}",
            report.converged_seeds + report.failed_seeds,
            report.converged_seeds,
            report.failed_seeds,
            report.roots.len()
        );
        return Ok((csv, summary));
    }
    let sda = best_admissible(spec, cfg)?;
    let approx = lattice_approximation(f, &sda, cfg.precision)?;
    let q = approx.generator.root.to_u64().unwrap_or(1);
    let region = stability_radius(f, &sda, &cfg.epsilon_hp(), cfg.precision)?;
    let tol_solve = cfg.tolerance();
    let zroots = solve_sparse(&approx.sparse, &tol_solve, cfg.precision)?;
    let (stable, periods) = stable_roots(&approx, &zroots, &region)?;
    if stable.is_empty() {
        return Err(CliError::Numeric(format!(
            "no stable roots: the stability radius {} lies below the lowest nonreal root",
            region.radius.to_f64()
        )));
    }
    let report = refine_roots(f, &stable, &tol_refine, 100)?;
    if report.converged_seeds == 0 {
        return Err(CliError::Numeric("no refinement seed converged".into()));
    }
    let csv = csvio::write_refined_csv(&report.roots, q);
    let summary = format!(
        "q {} stability_radius {} periods {:.3} seeds {} converged {} failed {} distinct roots {}",
        q,
        numfmt::to_decimal_string(region.radius.as_finite().unwrap(), 6),
        periods.to_f64(),
        report.converged_seeds + report.failed_seeds,
        report.converged_seeds,
        report.failed_seeds,
        report.roots.len()
    );
    Ok((csv, summary))
}

/// `plot`: SVG scatter from one or more CSV files.
pub fn cmd_plot(
    inputs: &[(String, String)],
    stability_circle: Option<f64>,
) -> Result<String, CliError> {
    if inputs.is_empty() {
        return Err(CliError::Input("at least one CSV input is required".into()));
    }
    let mut series = Vec::with_capacity(inputs.len());
    for (i, (label, text)) in inputs.iter().enumerate() {
        let rows = csvio::parse_roots_csv(text, 64).map_err(CliError::Input)?;
        if rows.is_empty() {
            return Err(CliError::Input(format!("CSV `{label}` has no data rows")));
        }
        let q = rows[0].source_q;
        let label = if q > 0 { format!("{label} (q={q})") } else { label.clone() };
        series.push(svg::PlotSeries {
            label,
            marker: svg::Marker::cycle(i),
            points: rows.iter().map(|r| (r.re.to_f64(), r.im.to_f64())).collect(),
        });
    }
    Ok(svg::render_scatter(&series, stability_circle))
}
