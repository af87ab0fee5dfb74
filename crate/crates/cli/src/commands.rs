use std::fmt;
use std::io::Write;

use projconst::designer::design_for_target_with_levels;
use projconst::numeric::format_g17;
use projconst::sweep::{agreement_sweep, curve_samples};
use projconst::{
    attainment_decision, min_projection_norm, mixed_lambda, operator_norm, truncation_gaps, verify_certificate,
    CertificateKind, Complex64, Error, ExampleCertificate, ExtendedVector, HyperplaneFunctional, Scalar,
};
use serde::de::DeserializeOwned;

use crate::report::{render, Report, Value};
use crate::{Cli, Command, Format};

const DEFAULT_SWEEP_COUNT: usize = 100;
const DEFAULT_CURVE_SAMPLES: usize = 101;

#[derive(Debug)]
pub enum Failure {
    Malformed(String),
    Domain(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Malformed(m) | Failure::Domain(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::DegenerateFunctional
            | Error::NotNormalized(_)
            | Error::InvalidValue(_)
            | Error::LengthMismatch { .. }
            | Error::MalformedCertificate(_) => Failure::Malformed(msg),
            Error::Internal(_) => Failure::Internal(msg),
            _ => Failure::Domain(msg),
        }
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_input(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Malformed(format!("cannot read {arg}: {e}")))
    }
}

fn parse<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(&read_input(arg)?).map_err(|e| Failure::Malformed(format!("invalid {what}: {e}")))
}

/// Parses with plain numbers in the `lists` entries and the `scalars` fields
/// promoted to `[re, 0]` pairs, so real and complex entries may be mixed.
fn parse_complex<T: DeserializeOwned>(arg: &str, what: &str, lists: &[&str], scalars: &[&str]) -> Result<T, Failure> {
    use serde_json::Value as J;
    let promote = |v: &mut J| {
        if v.is_number() {
            *v = J::Array(vec![v.clone(), J::from(0.0)]);
        }
    };
    let mut doc: J = serde_json::from_str(&read_input(arg)?).map_err(|e| Failure::Malformed(format!("invalid {what}: {e}")))?;
    if let J::Object(map) = &mut doc {
        for key in lists {
            if let Some(J::Array(items)) = map.get_mut(*key) {
                items.iter_mut().for_each(promote);
            }
        }
        for key in scalars {
            if let Some(v) = map.get_mut(*key) {
                promote(v);
            }
        }
    }
    serde_json::from_value(doc).map_err(|e| Failure::Malformed(format!("invalid {what}: {e}")))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string())),
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Failure::Malformed(format!("--tol must be positive, got {}", cli.tol)));
    }
    let format = cli.format;
    match &cli.command {
        Command::Lambda { functional } => lambda(cli, &parse(functional, "functional")?, format.unwrap_or(Format::Json)),
        Command::Norm { functional, vector } => norm(cli, functional, vector, format.unwrap_or(Format::Json)),
        Command::Design { target } => design(cli, *target, format.unwrap_or(Format::Json)),
        Command::Verify { certificate } => verify(cli, &parse(certificate, "certificate")?, format.unwrap_or(Format::Json)),
        Command::Sweep { count, curve } => sweep(cli, *count, *curve, format.unwrap_or(Format::Csv)),
        Command::Gaps { functional } => gaps(cli, &parse(functional, "functional")?, format.unwrap_or(Format::Json)),
    }
}

/// Prints the solver report even when the closed form does not apply; the
/// hypothesis violation is then reported through the exit status.
fn lambda(cli: &Cli, f: &HyperplaneFunctional, format: Format) -> Result<(), Failure> {
    let solved = min_projection_norm(f, cli.tol)?;
    let (_, reason) = attainment_decision(f)?;
    let closed = match mixed_lambda(f) {
        Ok(v) => Ok(v),
        Err(e @ Error::Hypothesis(_)) => Err(e),
        Err(e) => return Err(e.into()),
    };
    let closed_value = closed.as_ref().ok().copied();
    let report: Report = vec![
        ("functional", Value::json(f)),
        ("lambda_closed_form", Value::opt(closed_value)),
        ("lambda_solver", Value::Num(solved.lambda)),
        ("delta", Value::opt(closed_value.map(|c| solved.lambda - c))),
        ("attained", Value::Bool(solved.attained)),
        ("reason", Value::Str(reason.to_string())),
        ("minimizer", solved.minimizer.as_ref().map_or(Value::Null, Value::json)),
    ];
    emit(cli, &render(&report, format))?;
    closed.map(|_| ()).map_err(Failure::from)
}

fn norm_report<S: Scalar>(f: &HyperplaneFunctional<S>, y: &ExtendedVector<S>) -> Result<Report, Failure> {
    let r = operator_norm(f, y)?;
    let rows: Vec<String> = r.per_coord.iter().map(|&v| format_g17(v)).collect();
    Ok(vec![
        ("norm", Value::Num(r.norm)),
        ("tail_value", Value::Num(r.tail_value)),
        ("per_coord", Value::Json(format!("[{}]", rows.join(",")))),
        ("pairing", Value::Json(r.pairing.json_text())),
    ])
}

/// Real input is evaluated over the reals; any complex entry switches both
/// arguments to complex scalars.
fn norm(cli: &Cli, functional: &str, vector: &str, format: Format) -> Result<(), Failure> {
    let real = (
        serde_json::from_str::<HyperplaneFunctional<f64>>(&read_input(functional)?),
        serde_json::from_str::<ExtendedVector<f64>>(&read_input(vector)?),
    );
    let report = match real {
        (Ok(f), Ok(y)) => norm_report(&f, &y)?,
        _ => {
            let f: HyperplaneFunctional<Complex64> = parse_complex(functional, "functional", &["h"], &[])?;
            let y: ExtendedVector<Complex64> = parse_complex(vector, "vector", &["y"], &["s"])?;
            norm_report(&f, &y)?
        }
    };
    emit(cli, &render(&report, format))
}

fn certificate_summary(c: &ExampleCertificate) -> String {
    let shape = match &c.kind {
        CertificateKind::Mixed(p) => format!("mixed family n = {}, a = {}, b = {}", p.n, format_g17(p.a), format_g17(p.b)),
        CertificateKind::PureSingular => "purely singular functional".to_string(),
    };
    let last = c.gap_evidence.last_gap().map_or_else(|| "-".into(), format_g17);
    format!(
        "target {}: {shape}; closed form {}, solver {}; gap at level {} is {last}",
        format_g17(c.target),
        format_g17(c.lambda_closed_form),
        format_g17(c.lambda_solver),
        c.gap_evidence.levels.last().map_or_else(|| "-".into(), |m| m.to_string()),
    )
}

fn certificate_text(c: &ExampleCertificate, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string(c).map_err(|e| Failure::Internal(e.to_string()))?)),
        _ => Err(Failure::Malformed("certificates are written as json only".into())),
    }
}

/// With `--out` the certificate goes to the file and the summary to stdout;
/// otherwise the certificate goes to stdout and the summary to stderr.
fn design(cli: &Cli, target: f64, format: Format) -> Result<(), Failure> {
    let c = design_for_target_with_levels(target, cli.tol, &cli.levels)?;
    let text = certificate_text(&c, format)?;
    emit(cli, &text)?;
    let summary = certificate_summary(&c);
    if cli.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn verify(cli: &Cli, c: &ExampleCertificate, format: Format) -> Result<(), Failure> {
    let valid = verify_certificate(c)?;
    let report: Report = vec![("valid", Value::Bool(valid)), ("summary", Value::Str(certificate_summary(c)))];
    emit(cli, &render(&report, format))?;
    if valid {
        Ok(())
    } else {
        Err(Failure::Domain("certificate does not verify".into()))
    }
}

fn gaps(cli: &Cli, f: &HyperplaneFunctional, format: Format) -> Result<(), Failure> {
    let g = truncation_gaps(f, &cli.levels)?;
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["level", "gap"]).map_err(|e| Failure::Internal(e.to_string()))?;
            for (m, d) in g.levels.iter().zip(&g.gaps) {
                w.write_record([m.to_string(), format_g17(*d)]).map_err(|e| Failure::Internal(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?).expect("utf-8")
        }
        _ => render(
            &vec![
                ("levels", Value::json(&g.levels)),
                ("gaps", Value::Json(format!("[{}]", g.gaps.iter().map(|&d| format_g17(d)).collect::<Vec<_>>().join(",")))),
                ("positive", Value::Bool(g.is_strictly_positive())),
                ("nonincreasing", Value::Bool(g.is_nonincreasing())),
            ],
            format,
        ),
    };
    emit(cli, &text)
}

fn table(header: &[&str], rows: Vec<Vec<String>>, format: Format) -> Result<String, Failure> {
    let internal = |e: csv::Error| Failure::Internal(e.to_string());
    match format {
        Format::Csv | Format::Text => {
            let delimiter = if format == Format::Csv { b',' } else { b'\t' };
            let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
            w.write_record(header).map_err(internal)?;
            for row in rows {
                w.write_record(row).map_err(internal)?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8"))
        }
        Format::Json => {
            let objects: Vec<String> = rows
                .iter()
                .map(|row| {
                    let fields: Vec<String> = header.iter().zip(row).map(|(k, v)| format!("\"{k}\":{v}")).collect();
                    format!("{{{}}}", fields.join(","))
                })
                .collect();
            Ok(format!("[{}]\n", objects.join(",")))
        }
    }
}

fn sweep(cli: &Cli, count: Option<usize>, curve: Option<usize>, format: Format) -> Result<(), Failure> {
    let json = format == Format::Json;
    if let Some(n) = curve {
        let rows = curve_samples(n, count.unwrap_or(DEFAULT_CURVE_SAMPLES))?
            .into_iter()
            .map(|r| vec![r.n.to_string(), format_g17(r.a), format_g17(r.g)])
            .collect();
        return emit(cli, &table(&["n", "a", "g"], rows, format)?);
    }
    let rows = agreement_sweep(cli.seed, count.unwrap_or(DEFAULT_SWEEP_COUNT), cli.tol)?;
    let worst = rows.iter().map(|r| r.delta.abs()).fold(0.0, f64::max);
    let table_rows = rows
        .iter()
        .map(|r| {
            let h: Vec<String> = r.functional.atomic().iter().map(|&v| format_g17(v)).collect();
            let h = if json { format!("[{}]", h.join(",")) } else { h.join(";") };
            vec![
                r.id.to_string(),
                h,
                format_g17(r.functional.singular_weight()),
                format_g17(r.closed_form),
                format_g17(r.solver),
                format_g17(r.delta),
                r.attained.to_string(),
            ]
        })
        .collect();
    let header = ["id", "h", "gamma", "closed_form", "solver", "delta", "attained"];
    emit(cli, &table(&header, table_rows, format)?)?;
    eprintln!("{} instances, max |delta| = {}", rows.len(), format_g17(worst));
    Ok(())
}
