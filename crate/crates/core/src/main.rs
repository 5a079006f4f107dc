use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use perhom::complexes::{cone, hom_space_dims, HomReport};
use perhom::doc::{self, canonical, Document};
use perhom::exactla::Matrix;
use perhom::gralg::{flag_assemble, Algebra, tensor_periodic};
use perhom::koszul::{bgg_complex, bgg_module};
use perhom::orbit::orbit_hom;
use perhom::periodic::{compress, contract_periodic, expand_window, periodic_hom_dims};
use perhom::suites::{run_suite, Suite};
use perhom::{Error, Result};

#[derive(Parser)]
#[command(name = "perhom", version, about = "Exact computations with periodic complexes")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document and print it in canonical form.
    Validate { file: String },
    /// Cohomology dimensions of a complex, periodic complex or flag.
    Cohomology { file: String },
    /// Fold a bounded complex into an n-periodic one.
    Compress {
        file: String,
        #[arg(long)]
        n: usize,
    },
    /// Unroll a periodic complex on a finite window.
    Expand {
        file: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Vec<i64>,
    },
    /// Mapping cone of a chain map.
    Cone { file: String },
    /// Dimensions of Hom in the homotopy category (bounded or periodic).
    Homdim { source: String, target: String },
    /// Orbit-category Hom dimension, compared with the periodic side.
    OrbitHomdim {
        source: String,
        target: String,
        #[arg(long)]
        n: usize,
    },
    /// Contract a periodic complex by periodizing a window contraction.
    Periodize { file: String },
    /// The BGG complex of a graded module or module complex.
    Bgg { file: String },
    /// Tensor a bounded complex with a periodic complex.
    Tensor { bounded: String, periodic: String },
    /// Run a seeded verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Output {
    json: Value,
    table: String,
    ok: bool,
}

impl Output {
    fn ok(json: Value, table: String) -> Self {
        Output { json, table, ok: true }
    }
}

fn read_doc(path: &str) -> Result<Document> {
    let mut text = String::new();
    let io = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    io.map_err(|e| Error::Schema { pointer: "/".into(), message: format!("cannot read {path}: {e}") })?;
    doc::parse(&text)
}

fn wrong_kind(doc: &Document, expected: &str) -> Error {
    Error::Schema { pointer: "/kind".into(), message: format!("expected {expected}, got {}", doc.kind()) }
}

fn document_output(doc: Document) -> Output {
    let table = render_document(&doc);
    Output::ok(doc::to_value(&doc), table)
}

fn render_matrix(out: &mut String, label: &str, m: &Matrix) {
    out.push_str(&format!("{label} ({}x{})\n", m.rows(), m.cols()));
    for row in 0..m.rows() {
        let cells: Vec<String> = (0..m.cols()).map(|c| m.entry_string(row, c)).collect();
        out.push_str(&format!("  [{}]\n", cells.join(" ")));
    }
}

fn render_document(doc: &Document) -> String {
    let mut out = format!("{} over {}\n", doc.kind(), doc.field());
    match doc {
        Document::Complex(x) => {
            out.push_str(&format!("degrees {}..{}, dims {:?}\n", x.lo(), x.hi(), x.dims()));
            for i in x.lo()..x.hi() {
                render_matrix(&mut out, &format!("d^{i}"), &x.diff(i));
            }
        }
        Document::Periodic(p) => {
            out.push_str(&format!("period {}, dims {:?}\n", p.period(), p.dims()));
            for (r, d) in p.diffs().iter().enumerate() {
                render_matrix(&mut out, &format!("d^{r}"), d);
            }
        }
        other => out.push_str(&format!("{}\n", canonical(&doc::to_value(other)).trim_end())),
    }
    out
}

fn table_rows(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k}{}  {v}\n", " ".repeat(width - k.chars().count()))).collect()
}

fn cohomology_output(degrees: Vec<(i64, usize)>) -> Output {
    let json = json!({ "cohomology": degrees.iter().map(|(i, d)| json!([i, d])).collect::<Vec<_>>() });
    let rows: Vec<(String, String)> = degrees.iter().map(|(i, d)| (format!("H^{i}"), d.to_string())).collect();
    Output::ok(json, table_rows(&rows))
}

fn hom_output(r: HomReport) -> Output {
    let json = json!({ "cycles": r.cycles, "boundaries": r.boundaries, "hom": r.hom });
    let rows = vec![
        ("cycles".to_string(), r.cycles.to_string()),
        ("boundaries".to_string(), r.boundaries.to_string()),
        ("hom".to_string(), r.hom.to_string()),
    ];
    Output::ok(json, table_rows(&rows))
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Validate { file } => Ok(document_output(read_doc(&file)?)),
        Command::Cohomology { file } => match read_doc(&file)? {
            Document::Complex(x) => Ok(cohomology_output(x.cohomology_dims()?)),
            Document::Periodic(p) => Ok(cohomology_output((0..).zip(p.cohomology()?).collect())),
            Document::Flag(f) => Ok(cohomology_output((0..).zip(flag_assemble(&f)?.cohomology()?).collect())),
            other => Err(wrong_kind(&other, "complex, periodic or flag")),
        },
        Command::Compress { file, n } => match read_doc(&file)? {
            Document::Complex(x) => Ok(document_output(Document::Periodic(compress(&x, n)?))),
            other => Err(wrong_kind(&other, "complex")),
        },
        Command::Expand { file, window } => match read_doc(&file)? {
            Document::Periodic(p) => Ok(document_output(Document::Complex(expand_window(&p, window[0], window[1])?))),
            other => Err(wrong_kind(&other, "periodic")),
        },
        Command::Cone { file } => match read_doc(&file)? {
            Document::ChainMap(f) => Ok(document_output(Document::Complex(cone(&f)?.complex))),
            other => Err(wrong_kind(&other, "chain-map")),
        },
        Command::Homdim { source, target } => match (read_doc(&source)?, read_doc(&target)?) {
            (Document::Complex(x), Document::Complex(y)) => Ok(hom_output(hom_space_dims(&x, &y)?)),
            (Document::Periodic(x), Document::Periodic(y)) => Ok(hom_output(periodic_hom_dims(&x, &y)?)),
            (x, _) => Err(wrong_kind(&x, "two complexes or two periodic complexes")),
        },
        Command::OrbitHomdim { source, target, n } => match (read_doc(&source)?, read_doc(&target)?) {
            (Document::Complex(x), Document::Complex(y)) => {
                let r = orbit_hom(&x, &y, n)?;
                let json = json!({
                    "n": n,
                    "summands": r.summands.iter().map(|(i, d)| json!([i, d])).collect::<Vec<_>>(),
                    "total": r.total,
                    "periodic_side": r.periodic_side,
                    "equal": r.is_equal(),
                });
                let mut rows: Vec<(String, String)> =
                    r.summands.iter().map(|(i, d)| (format!("Hom(X, Y[{}])", n as i64 * i), d.to_string())).collect();
                rows.push(("total".into(), r.total.to_string()));
                rows.push(("periodic side".into(), r.periodic_side.to_string()));
                Ok(Output { json, table: table_rows(&rows), ok: r.is_equal() })
            }
            (x, _) => Err(wrong_kind(&x, "two complexes")),
        },
        Command::Periodize { file } => match read_doc(&file)? {
            Document::Periodic(p) => match contract_periodic(&p)? {
                Some(h) => {
                    let comps: Vec<Value> = h.components().iter().map(matrix_value).collect();
                    let mut table = String::from("contractible\n");
                    for (r, m) in h.components().iter().enumerate() {
                        render_matrix(&mut table, &format!("σ^{r}"), m);
                    }
                    Ok(Output::ok(json!({ "contractible": true, "homotopy": comps }), table))
                }
                None => Ok(Output {
                    json: json!({ "contractible": false, "cohomology": p.cohomology()? }),
                    table: "not contractible\n".into(),
                    ok: false,
                }),
            },
            other => Err(wrong_kind(&other, "periodic")),
        },
        Command::Bgg { file } => {
            let doc = read_doc(&file)?;
            let algebra = match &doc {
                Document::GradedModule(m) => Some(m.algebra()),
                Document::ModuleComplex(mc) => Some(mc.algebra()),
                _ => None,
            };
            if let Some(a @ Algebra::Ext(_)) = algebra {
                return Err(Error::Schema { pointer: "/algebra".into(), message: format!("expected a module over a polynomial ring, got {a}") });
            }
            let phi = match doc {
                Document::GradedModule(m) => bgg_module(&m)?,
                Document::ModuleComplex(mc) => bgg_complex(&mc)?,
                other => return Err(wrong_kind(&other, "graded-module or module-complex")),
            };
            let h = phi.cohomology_dims()?;
            let mut json = doc::to_value(&Document::Complex(phi.complex.clone()));
            json["cohomology"] = Value::Array(h.iter().map(|(i, d)| json!([i, d])).collect());
            let table = render_document(&Document::Complex(phi.complex)) + &cohomology_output(h).table;
            Ok(Output::ok(json, table))
        }
        Command::Tensor { bounded, periodic } => match (read_doc(&bounded)?, read_doc(&periodic)?) {
            (Document::Complex(x), Document::Periodic(y)) => Ok(document_output(Document::Periodic(tensor_periodic(&x, &y)?))),
            (x, _) => Err(wrong_kind(&x, "a complex and a periodic complex")),
        },
        Command::Verify { suite, seed } => {
            let s = Suite::from_name(&suite).ok_or_else(|| Error::Schema {
                pointer: "/".into(),
                message: format!(
                    "unknown suite {suite:?}; available: {}",
                    Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
                ),
            })?;
            let report = run_suite(s, seed)?;
            Ok(Output { json: report.to_json(), table: report.to_table(), ok: report.ok() })
        }
    }
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m.entry_string(i, j))).collect())).collect())
}

/// Failures of an identity the command checks, as opposed to bad input.
fn is_violation(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidComplex(_)
            | Error::InvalidChainMap(_)
            | Error::InvalidHomotopy(_)
            | Error::InvalidModule(_)
            | Error::FlagNotSquareZero
            | Error::TotalizationNotSquareZero(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Json => print!("{}", canonical(&out.json)),
                Format::Table => print!("{}", out.table),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) if is_violation(&e) => {
            match cli.format {
                Format::Json => print!("{}", canonical(&json!({ "violation": e.to_string() }))),
                Format::Table => println!("violation: {e}"),
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
