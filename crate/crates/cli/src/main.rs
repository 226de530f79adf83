use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lattice_forge::terms::Caps;
use lattice_forge_cli::commands::{self, GadgetSpec, Output};
use lattice_forge_cli::selfcheck::selfcheck;
use lattice_forge_cli::CliError;

/// Finite partial lattices, their congruences, Boolean-valued order and
/// amalgamation.
///
/// Exit codes: 0 ok, 1 validation failure, 2 property violation, 3 parse
/// error.
#[derive(Parser)]
#[command(name = "lattice-forge", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Outputs {
    /// Write the Hasse diagram of the result in DOT format.
    #[arg(long, value_name = "PATH", global = true)]
    dot: Option<PathBuf>,
    /// Write the resulting structure here instead of standard output.
    #[arg(long, short, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapArgs {
    /// Largest term height explored.
    #[arg(long, default_value_t = Caps::default().height, global = true)]
    height_cap: usize,
    /// Largest number of term classes.
    #[arg(long, default_value_t = Caps::default().size, global = true)]
    size_cap: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps { height: self.height_cap, size: self.size_cap }
    }
}

#[derive(Args)]
struct TermArgs {
    #[arg(long)]
    term1: String,
    #[arg(long)]
    term2: String,
}

#[derive(Args)]
struct FormationArgs {
    k: PathBuf,
    p: PathBuf,
    q: PathBuf,
    /// `K -> P` as `k=p,...`; by default each element goes to its namesake.
    #[arg(long)]
    f: Option<String>,
    /// `K -> Q`, same format.
    #[arg(long)]
    g: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a file; prints OK or the first violation.
    Validate {
        file: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// List the congruences of P.
    Con {
        file: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// The Boolean value [[term1 <= term2]].
    Bval {
        file: PathBuf,
        #[command(flatten)]
        terms: TermArgs,
    },
    /// Compare two terms in the free lattice generated by P.
    Freecmp {
        file: PathBuf,
        #[command(flatten)]
        terms: TermArgs,
    },
    /// The pushout of K -> P, K -> Q.
    Pushout {
        #[command(flatten)]
        formation: FormationArgs,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// The quotient P/G by a prime filter of E.
    Quotient {
        file: PathBuf,
        /// The join-irreducible generating the filter.
        #[arg(long)]
        filter: String,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Build a gadget or apply a list of them.
    Gadget {
        #[command(subcommand)]
        which: GadgetCmd,
        #[command(flatten)]
        outputs: Outputs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// The proper measured lattice generated by a measured partial lattice.
    TheoremA {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Amalgamate K -> P, K -> Q into a proper measured lattice.
    TheoremB {
        #[command(flatten)]
        formation: FormationArgs,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Run the invariant suites on the files and on seeded random cases.
    Selfcheck {
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// M3[K] for a lattice file or a chain such as `2chain`.
    M3 { k: String },
    /// The perspectivity partial lattice; with D and four values, the
    /// measured gadget.
    Persp {
        d: Option<String>,
        #[arg(num_args = 4, value_names = ["XI", "ETA", "ALPHA", "BETA"])]
        values: Vec<String>,
    },
    /// The relative-complement gadget.
    Relcomp { d: String, ab: String, bc: String },
    /// The three-element chain gadget.
    Chain3 { d: String, alpha: String, beta: String },
    /// Apply steps `relcomp:a,b,c`, `persp:o,a,b,i`, `chain3:o,i,alpha` in
    /// order.
    Saturate { file: String, steps: Vec<String> },
}

fn gadget_spec(g: GadgetCmd) -> Result<GadgetSpec, CliError> {
    Ok(match g {
        GadgetCmd::M3 { k } => GadgetSpec::M3(k),
        GadgetCmd::Persp { d: None, .. } => GadgetSpec::Persp(None),
        GadgetCmd::Persp { d: Some(d), values } => {
            let v: [String; 4] =
                values.try_into().map_err(|_| CliError::Parse("persp needs XI ETA ALPHA BETA after D".into()))?;
            GadgetSpec::Persp(Some((d, v)))
        }
        GadgetCmd::Relcomp { d, ab, bc } => GadgetSpec::RelComp { d, ab, bc },
        GadgetCmd::Chain3 { d, alpha, beta } => GadgetSpec::Chain3 { d, alpha, beta },
        GadgetCmd::Saturate { file, steps } => GadgetSpec::Saturate { file, steps },
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Reports go to stdout unless the structure itself does.
fn emit(out: Output, outputs: &Outputs) -> Result<(), CliError> {
    if let (Some(p), Some(d)) = (&outputs.dot, &out.dot) {
        write(p, d)?;
    }
    match (&out.json, &outputs.out) {
        (Some(j), Some(p)) => {
            write(p, j)?;
            print!("{}", out.report);
        }
        (Some(j), None) => {
            eprint!("{}", out.report);
            print!("{j}");
        }
        (None, _) => print!("{}", out.report),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let none = Outputs { dot: None, out: None };
    match cli.cmd {
        Cmd::Validate { file, dot } => emit(commands::validate(&file)?, &Outputs { dot, out: None }),
        Cmd::Con { file, dot } => emit(commands::con(&file)?, &Outputs { dot, out: None }),
        Cmd::Bval { file, terms } => emit(commands::bval(&file, &terms.term1, &terms.term2)?, &none),
        Cmd::Freecmp { file, terms } => emit(commands::freecmp(&file, &terms.term1, &terms.term2)?, &none),
        Cmd::Pushout { formation: fa, outputs } => {
            let fm = commands::load_formation(&fa.k, &fa.p, &fa.q, fa.f.as_deref(), fa.g.as_deref())?;
            emit(commands::pushout(&fm)?, &outputs)
        }
        Cmd::Quotient { file, filter, outputs } => emit(commands::quotient(&file, &filter)?, &outputs),
        Cmd::Gadget { which, outputs, caps } => emit(commands::gadget(&gadget_spec(which)?, caps.caps())?, &outputs),
        Cmd::TheoremA { file, caps, outputs } => emit(commands::theorem_a_cmd(&file, caps.caps())?, &outputs),
        Cmd::TheoremB { formation: fa, caps, outputs } => {
            let fm = commands::load_formation(&fa.k, &fa.p, &fa.q, fa.f.as_deref(), fa.g.as_deref())?;
            emit(commands::theorem_b_cmd(&fm, caps.caps())?, &outputs)
        }
        Cmd::Selfcheck { files, seed, cases } => emit(selfcheck(&files, seed, cases)?, &none),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
