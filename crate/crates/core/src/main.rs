//! Command-line driver: model validation, cohomology tables, pairing
//! matrices, the potential, and the verification suites.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use symfilt::cone::ConeAlgebra;
use symfilt::equiv::{ainfty_map_check, sdr_check, Equivalence};
use symfilt::error::Error;
use symfilt::exterior::{Form, MultiIndex};
use symfilt::filtered::{stasheff_check, FilteredElement, FpComplex};
use symfilt::homology::{
    cone_cohomology, cyclic_check, derham_cohomology, filtered_cohomology, gysin_check,
    pairing_matrix, potential_phi,
};
use symfilt::lefschetz::{sl2_suite, LefschetzOps};
use symfilt::model::{builtin, LieModel};
use symfilt::modelfile::read_model_unvalidated;
use symfilt::report::{Report, Table, Verdict};
use symfilt::sample::{SuiteConfig, DEFAULT_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED};
use symfilt::scalar::{format_scalar, parse_scalar};

#[derive(Parser)]
#[command(
    name = "symfilt",
    about = "Exact computer algebra for filtered forms and cone cdgas on symplectic models",
    version
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexKind {
    Derham,
    Filtered,
    Cone,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Sl2,
    Stasheff,
    #[value(name = "ainfty-map")]
    AinftyMap,
    Sdr,
    Cyclic,
    Gysin,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure equations of a model (d² = 0, d(omega) = 0,
    /// nondegeneracy) and report each verdict.
    Validate { model: String },

    /// Per-degree dimensions and representative bases of a complex.
    Cohomology {
        model: String,
        #[arg(long, value_enum)]
        complex: ComplexKind,
        /// Filtration level (ignored for the de Rham complex).
        #[arg(long, default_value_t = 0)]
        p: usize,
    },

    /// Run a verification suite and report every identity.
    Verify {
        model: String,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        p: usize,
        /// Sample count for identities whose tuple space exceeds the budget.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        /// RNG seed recorded in the report whenever sampling is used.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Exhaustive-enumeration budget (tuple count).
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },

    /// Pairing matrix between cohomology in complementary degrees, with
    /// the nondegeneracy verdict.
    Pairing {
        model: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        degree: usize,
    },

    /// Evaluate the action potential of a formal sum read from a file.
    Potential {
        model: String,
        #[arg(long)]
        p: usize,
        /// JSON file: {"terms": [{"coeff": "1", "side": "plain",
        /// "form": [{"coeff": "1", "indices": [1, 4]}]}]}
        #[arg(long)]
        element: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Table => print!("{}", report.to_table()),
                Format::Json => println!("{}", report.to_json()),
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_model(name: &str) -> Result<LieModel, Error> {
    if let Some(model) = builtin(name) {
        return Ok(model);
    }
    let path = PathBuf::from(name);
    if !path.exists() {
        return Err(Error::Input(format!(
            "unknown model {name:?}: not a builtin (kt4, t4, t6, iw6) and no such file"
        )));
    }
    read_model_unvalidated(&path)
}

/// Loads and fully validates; most commands refuse invalid models.
fn load_valid_model(name: &str) -> Result<Arc<LieModel>, Error> {
    let model = load_model(name)?;
    let report = model.validate();
    if !report.passed() {
        return Err(Error::InvalidModel {
            name: model.name().to_string(),
            failures: report.failure_summary(),
        });
    }
    Ok(Arc::new(model))
}

fn check_p(model: &LieModel, p: usize) -> Result<(), Error> {
    if p > model.half_dim() {
        return Err(Error::FiltrationOutOfRange {
            p,
            n: model.half_dim(),
        });
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Validate { model } => {
            let model = load_model(model)?;
            let validation = model.validate();
            let mut report = Report::new("validate", model.name(), 0);
            report.tables.push(Table {
                title: format!("structure checks for {}", model.name()),
                headers: vec!["check".into(), "status".into(), "detail".into()],
                rows: validation
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            if c.passed() { "pass" } else { "FAIL" }.into(),
                            c.failures.join("; "),
                        ]
                    })
                    .collect(),
            });
            for c in &validation.checks {
                report.verdicts.push(Verdict {
                    name: format!("validate: {}", c.name),
                    pass: c.passed(),
                    counterexample: c.failures.first().cloned(),
                });
            }
            Ok(report)
        }

        Command::Cohomology { model, complex, p } => {
            let model = load_valid_model(model)?;
            let mut report = Report::new("cohomology", model.name(), *p);
            match complex {
                ComplexKind::Derham => {
                    let ops = LefschetzOps::new(model);
                    report.tables.push(derham_cohomology(&ops).table());
                }
                ComplexKind::Filtered => {
                    check_p(&model, *p)?;
                    let ops = Arc::new(LefschetzOps::new(Arc::clone(&model)));
                    let fp = FpComplex::new(ops, *p)?;
                    report.tables.push(filtered_cohomology(&fp).table());
                }
                ComplexKind::Cone => {
                    check_p(&model, *p)?;
                    let cone = ConeAlgebra::new(model, *p)?;
                    report.tables.push(cone_cohomology(&cone).table());
                }
            }
            Ok(report)
        }

        Command::Verify {
            model,
            suite,
            p,
            samples,
            seed,
            budget,
        } => {
            let model = load_valid_model(model)?;
            check_p(&model, *p)?;
            let cfg = SuiteConfig {
                budget: *budget,
                samples: *samples,
                seed: *seed,
            };
            let ops = Arc::new(LefschetzOps::new(Arc::clone(&model)));
            let mut report = Report::new("verify", model.name(), *p);

            let wants = |s: Suite| *suite == s || *suite == Suite::All;

            if wants(Suite::Sl2) {
                report.absorb_identities(&sl2_suite(&ops, *p));
            }
            if wants(Suite::Stasheff) {
                let fp = FpComplex::new(Arc::clone(&ops), *p)?;
                report.absorb_identities(&stasheff_check(&fp, &cfg));
            }
            if wants(Suite::AinftyMap) {
                let fp = FpComplex::new(Arc::clone(&ops), *p)?;
                let cone = ConeAlgebra::new(Arc::clone(&model), *p)?;
                let eq = Equivalence::new(&fp, &cone)?;
                report.absorb_identities(&ainfty_map_check(&eq, &cfg));
            }
            if wants(Suite::Sdr) {
                let fp = FpComplex::new(Arc::clone(&ops), *p)?;
                let cone = ConeAlgebra::new(Arc::clone(&model), *p)?;
                let eq = Equivalence::new(&fp, &cone)?;
                report.absorb_identities(&sdr_check(&eq));
            }
            if wants(Suite::Cyclic) {
                let fp = FpComplex::new(Arc::clone(&ops), *p)?;
                report.absorb_identities(&cyclic_check(&fp, &cfg));
            }
            if wants(Suite::Gysin) {
                let fp = FpComplex::new(Arc::clone(&ops), *p)?;
                let cone = ConeAlgebra::new(Arc::clone(&model), *p)?;
                report.absorb_identities(&gysin_check(&ops, &fp, &cone));
            }
            Ok(report)
        }

        Command::Pairing { model, p, degree } => {
            let model = load_valid_model(model)?;
            check_p(&model, *p)?;
            let ops = Arc::new(LefschetzOps::new(Arc::clone(&model)));
            let fp = FpComplex::new(ops, *p)?;
            if *degree > fp.top_degree() {
                return Err(Error::Input(format!(
                    "degree {degree} out of range 0..={}",
                    fp.top_degree()
                )));
            }
            let cohomology = filtered_cohomology(&fp);
            let matrix = pairing_matrix(&fp, &cohomology, *degree);
            let mut report = Report::new("pairing", model.name(), *p);
            report.tables.push(matrix.table());
            report.verdicts.push(Verdict {
                name: format!("pairing nondegeneracy at degree {degree}"),
                pass: matrix.full_rank,
                counterexample: (!matrix.full_rank).then(|| {
                    format!(
                        "rank {} on a {}×{} matrix",
                        matrix.rank,
                        matrix.matrix.rows(),
                        matrix.matrix.cols()
                    )
                }),
            });
            Ok(report)
        }

        Command::Potential { model, p, element } => {
            let model = load_valid_model(model)?;
            check_p(&model, *p)?;
            let ops = Arc::new(LefschetzOps::new(Arc::clone(&model)));
            let fp = FpComplex::new(ops, *p)?;
            let terms = read_element_file(&fp, element)?;
            let value = potential_phi(&fp, &terms);
            let mut report = Report::new("potential", model.name(), *p);
            report.tables.push(Table {
                title: "action potential".into(),
                headers: vec![
                    "value".into(),
                    "tuples evaluated".into(),
                    "tuples dropped by degree".into(),
                ],
                rows: vec![vec![
                    format_scalar(&value.value),
                    value.evaluated_terms.to_string(),
                    value.dropped_terms.to_string(),
                ]],
            });
            Ok(report)
        }
    }
}

#[derive(Deserialize)]
struct ElementFile {
    terms: Vec<ElementTerm>,
}

#[derive(Deserialize)]
struct ElementTerm {
    #[serde(default = "one_string")]
    coeff: String,
    side: String,
    form: Vec<ElementFormTerm>,
}

#[derive(Deserialize)]
struct ElementFormTerm {
    coeff: String,
    indices: Vec<u8>,
}

fn one_string() -> String {
    "1".into()
}

fn read_element_file(
    fp: &FpComplex,
    path: &PathBuf,
) -> Result<Vec<(symfilt::scalar::Scalar, FilteredElement)>, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ElementFile = serde_json::from_str(&text).map_err(|e| Error::Input(format!(
        "element file {}: line {}, column {}: {e}",
        path.display(),
        e.line(),
        e.column()
    )))?;
    let mut out = Vec::new();
    for (i, term) in file.terms.iter().enumerate() {
        let coeff = parse_scalar(&term.coeff)?;
        let mut form = Form::zero();
        for (j, ft) in term.form.iter().enumerate() {
            let c = parse_scalar(&ft.coeff)?;
            let index = MultiIndex::new(ft.indices.clone()).ok_or(Error::BadMultiIndex {
                context: format!("terms[{i}].form[{j}]"),
                dim: fp.ops().model().dim(),
                indices: ft.indices.clone(),
            })?;
            form.add_term(index, c);
        }
        let element = match term.side.as_str() {
            "plain" => fp.plain(form)?,
            "barred" => fp.barred(form)?,
            other => {
                return Err(Error::Input(format!(
                    "terms[{i}].side must be \"plain\" or \"barred\", got {other:?}"
                )))
            }
        };
        out.push((coeff, element));
    }
    Ok(out)
}
