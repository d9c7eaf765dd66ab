use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use walgebra::export::{self, ZMode};
use walgebra::finite::{finite_table, gf_name};
use walgebra::miura::miura_hom_check;
use walgebra::spec::{load_spec, parse_vector};
use walgebra::verify::{self, route_checks, zeta_check, VerifyOptions};
use walgebra::walg::{lambda_bracket_closed, virasoro, w_name, zeta_twist};
use walgebra::zhu::{zhu_iso_check, zhu_table, ZhuRoute};
use walgebra::{Error, GenTable, GradedSetup, Report, Route, WAlgebra};

#[derive(Parser, Debug)]
#[command(name = "walgebra", version, about = "Exact computations with classical W-algebras")]
struct Cli {
    /// Algebra specification (JSON)
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// `formal` or a rational value such as `1/2`
    #[arg(long, global = true, default_value = "formal")]
    z: String,
    /// ζ ∈ g^e as comma-separated rationals
    #[arg(long, global = true)]
    zeta: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = RouteArg::Closed)]
    route: RouteArg,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Direct,
    Closed,
    Skew,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grades, the g^f basis and the δ table
    Setup,
    /// The Poisson bracket table of the finite W-algebra
    FiniteBracket,
    /// All generators w(q_j) with their linear terms
    Generators,
    /// The λ-bracket table of the affine W-algebra
    LambdaBracket,
    /// The Zhu bracket table and its isomorphism report
    Zhu,
    /// Miura images and the homomorphism report
    Miura,
    /// Every cross-check; the standard test algebras when --algebra is absent
    Verify,
}

struct Output {
    doc: Value,
    text: String,
    report: Option<Report>,
}

fn load(cli: &Cli) -> walgebra::Result<GradedSetup> {
    let path = cli.algebra.as_ref().ok_or_else(|| Error::Parse {
        field: "--algebra".into(),
        message: "an algebra specification is required".into(),
    })?;
    load_spec(path)?.build()
}

fn zeta_vec(cli: &Cli) -> walgebra::Result<Option<walgebra::Vector>> {
    cli.zeta.as_deref().map(parse_vector).transpose()
}

fn with_report_text(text: String, report: &Report) -> String {
    format!("{text}\n{}", report.render())
}

fn run(cli: &Cli) -> walgebra::Result<Output> {
    let z = ZMode::parse(&cli.z).map_err(|_| Error::Parse { field: "--z".into(), message: format!("`{}` is neither `formal` nor a rational", cli.z) })?;
    match cli.command {
        Command::Setup => {
            let setup = load(cli)?;
            let report = setup.validate();
            Ok(Output {
                doc: export::with_report(export::setup_json(&setup), &report),
                text: with_report_text(export::setup_text(&setup), &report),
                report: Some(report),
            })
        }
        Command::FiniteBracket => {
            let setup = load(cli)?;
            let table = finite_table(&setup);
            Ok(Output {
                doc: export::z_table_json("finite-bracket", &table, &z, &gf_name),
                text: export::z_table_text(&table, &z, &gf_name),
                report: None,
            })
        }
        Command::Generators => {
            let wa = WAlgebra::new(load(cli)?)?;
            Ok(Output { doc: export::generators_json(&wa), text: export::generators_text(&wa), report: None })
        }
        Command::LambdaBracket => lambda(cli, &z),
        Command::Zhu => {
            let wa = WAlgebra::new(load(cli)?)?;
            let table = zhu_table(&wa, ZhuRoute::Closed);
            let report = zhu_iso_check(&wa);
            Ok(Output {
                doc: export::with_report(export::z_table_json("zhu", &table, &z, &w_name), &report),
                text: with_report_text(export::z_table_text(&table, &z, &w_name), &report),
                report: Some(report),
            })
        }
        Command::Miura => {
            let wa = WAlgebra::new(load(cli)?)?;
            let mut extra = Vec::new();
            if !wa.setup().triple().is_zero() {
                let table = wa.table(Route::Closed).eval_z(&walgebra::rational::q(0));
                extra.push(("L".to_string(), virasoro(wa.setup(), &table).l));
            }
            let images = export::miura_images(&wa, &extra);
            let report = miura_hom_check(&wa);
            Ok(Output {
                doc: export::miura_json(wa.setup(), &images, &report),
                text: with_report_text(export::miura_text(wa.setup(), &images), &report),
                report: Some(report),
            })
        }
        Command::Verify => {
            let mut report = Report::new();
            if cli.algebra.is_some() {
                let opts = VerifyOptions { zeta: zeta_vec(cli)?, z_values: Vec::new() };
                report = verify::verify_setup(load(cli)?, &opts)?;
            } else {
                for (label, setup) in verify::standard_setups()? {
                    report.extend(&label, verify::verify_setup(setup, &VerifyOptions::default())?);
                }
            }
            Ok(Output { doc: export::report_json("verify", &report), text: report.render(), report: Some(report) })
        }
    }
}

fn lambda(cli: &Cli, z: &ZMode) -> walgebra::Result<Output> {
    let wa = WAlgebra::new(load(cli)?)?;
    let setup = wa.setup();
    if let Some(zeta) = zeta_vec(cli)? {
        let tw = zeta_twist(setup, &zeta)?;
        let n = setup.jf_len();
        let table = GenTable::from_fn(n, |i, j| lambda_bracket_closed(setup, i, j, &tw));
        let report = zeta_check(setup, &zeta)?;
        let mut doc = export::lambda_table_json(&table, &ZMode::Formal, "closed-zeta");
        doc["zeta"] = json!(zeta.iter().map(walgebra::rational::fmt_q).collect::<Vec<_>>());
        return Ok(Output {
            doc: export::with_report(doc, &report),
            text: with_report_text(export::lambda_table_text(&table, &ZMode::Formal), &report),
            report: Some(report),
        });
    }
    let (route, name) = match cli.route {
        RouteArg::Direct => (Route::Direct, "direct"),
        RouteArg::Skew => (Route::Skew, "skew"),
        RouteArg::Closed | RouteArg::All => (Route::Closed, "closed"),
    };
    let table = wa.table(route);
    let doc = export::lambda_table_json(&table, z, name);
    let text = export::lambda_table_text(&table, z);
    if cli.route == RouteArg::All {
        let report = route_checks(&wa, &table);
        return Ok(Output { doc: export::with_report(doc, &report), text: with_report_text(text, &report), report: Some(report) });
    }
    Ok(Output { doc, text, report: None })
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    let body = match cli.format {
        Format::Json => export::to_string(&out.doc),
        Format::Text => out.text.clone(),
    };
    match &cli.out {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn fail(err: &Error) -> ExitCode {
    eprint!("{}", export::to_string(&export::error_json(err)));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            return fail(&Error::InvalidInput(msg.lines().next().unwrap_or("invalid arguments").to_string()));
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            return fail(&Error::InvalidInput(format!("--jobs: {e}")));
        }
    }
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    if let Err(e) = emit(&cli, &out) {
        return fail(&Error::InvalidInput(format!("cannot write output: {e}")));
    }
    match &out.report {
        Some(r) if !r.all_passed() => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
