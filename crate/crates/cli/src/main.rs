//! `frobvir`: checks Frobenius algebras and Virasoro algebroids given in the
//! line-oriented definition format, and builds the vacuum module `V_F`.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! and 2 on unreadable input or bad usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use frobenius_virasoro::algebroid::VirasoroAlgebroid;
use frobenius_virasoro::envelope::{VacuumModule, DEFAULT_CUTOFF};
use frobenius_virasoro::format::{parse, AlgebraSpec, Definition};
use frobenius_virasoro::frobenius::{Builtin, FrobeniusAlgebra};
use frobenius_virasoro::modes::charge_of_virasoro_vector;
use frobenius_virasoro::scalar::format_scalar;
use frobenius_virasoro::verify::{
    character, check_character, check_frobenius_axioms, identity_reports, run_all, CheckReport, DEFAULT_DEGREE,
};

#[derive(Parser)]
#[command(name = "frobvir", version, about = "Exact checks for Frobenius-Virasoro vertex algebras")]
struct Cli {
    /// Print one tab-separated record per check instead of prose.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Frobenius axioms (or the algebroid identities) of a definition.
    Validate { file: PathBuf },
    /// Check the six algebroid identities and their cyclic corollaries.
    CheckAxioms { file: PathBuf },
    /// Print the PBW basis of V_F in each degree up to the given one.
    Build {
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        degree: u32,
        file: PathBuf,
    },
    /// Print the graded dimensions of V_F in degrees 0 to N.
    Character {
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        degree: u32,
        file: PathBuf,
    },
    /// Run the full verification suite on states of degree up to N.
    Verify {
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u32,
        file: PathBuf,
    },
    /// Print a built-in algebra, its character and its verification suite.
    Demo {
        /// e.g. k_5, dual_numbers(3), truncated_poly(3), group_algebra_z2,
        /// direct_sum(k_1,k_2)
        builtin: String,
    },
}

/// A usage or input problem; reported on stderr with exit status 2.
struct UsageError(String);

type Outcome = Result<bool, UsageError>;

/// Exits quietly when stdout is closed early, as in `frobvir build | head`.
fn quiet_on_broken_pipe() {
    let default = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let msg = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .unwrap_or_default();
        if msg.contains("Broken pipe") {
            std::process::exit(0);
        }
        default(info);
    }));
}

fn main() -> ExitCode {
    quiet_on_broken_pipe();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { file } => validate(file, cli.machine),
        Command::CheckAxioms { file } => check_axioms(file, cli.machine),
        Command::Build { degree, file } => build(file, *degree, cli.machine),
        Command::Character { degree, file } => character_cmd(file, *degree, cli.machine),
        Command::Verify { degree, file } => verify(file, *degree, cli.machine),
        Command::Demo { builtin } => demo(builtin, cli.machine),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Definition, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<(String, FrobeniusAlgebra), UsageError> {
    match load(path)? {
        Definition::Algebra(spec) => {
            let f = spec
                .to_algebra()
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            Ok((spec.name, f))
        }
        Definition::Algebroid(_) => Err(UsageError(format!(
            "{}: this command needs an algebra definition; algebroid files support validate and check-axioms",
            path.display()
        ))),
    }
}

/// Degree above which enumeration gets slow, by algebra dimension.
fn safety_bound(dim: usize) -> u32 {
    match dim {
        0..=2 => 12,
        3 => 10,
        _ => 8,
    }
}

fn warn_degree(f: &FrobeniusAlgebra, degree: u32) {
    let bound = safety_bound(f.dim());
    if degree > bound {
        eprintln!(
            "warning: degree {degree} exceeds the safety bound {bound} for dimension {}; this may take a long time",
            f.dim()
        );
    }
}

fn print_reports(reports: &[CheckReport], machine: bool) -> bool {
    for r in reports {
        if machine {
            println!("{}", r.machine_record());
        } else {
            println!("{r}");
        }
    }
    reports.iter().all(CheckReport::passed)
}

fn validate(path: &Path, machine: bool) -> Outcome {
    let (name, f) = match load(path)? {
        Definition::Algebroid(spec) => return algebroid_axioms(path, &spec.name, spec.to_algebroid(), machine),
        Definition::Algebra(spec) => {
            let f = spec
                .to_algebra()
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            (spec.name, f)
        }
    };
    let report = f.validate();
    if machine {
        return Ok(print_reports(&[check_frobenius_axioms(&f)], true));
    }
    println!("algebra {name}: dimension {}", f.dim());
    for v in &report.violations {
        println!("  {}", v.describe(f.labels()));
    }
    let rank = f.form_rank();
    println!(
        "charge <e,e> = {} (Virasoro-convention charge {})",
        format_scalar(&f.charge()),
        format_scalar(&charge_of_virasoro_vector(&f))
    );
    println!(
        "form rank {rank} of {}{}",
        f.dim(),
        if rank == f.dim() { "" } else { " (degenerate)" }
    );
    if report.is_valid() {
        println!("frobenius-axioms: pass");
    } else {
        println!("frobenius-axioms: fail ({} violations)", report.violations.len());
    }
    Ok(report.is_valid())
}

fn algebroid_axioms(
    path: &Path,
    name: &str,
    algebroid: Result<VirasoroAlgebroid, frobenius_virasoro::frobenius::ShapeError>,
    machine: bool,
) -> Outcome {
    let a = algebroid.map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    if !machine {
        println!("algebroid {name}: rank {} over a base of dimension {}", a.rank(), a.base().dim());
    }
    let axioms = match a.check_axioms() {
        Ok(r) => r,
        Err(err) => {
            if machine {
                println!("algebroid-axioms\tfail\tchecked=0\tfailed=1\twitness={err}\tnotes=-");
            } else {
                println!("algebroid-axioms: fail ({err})");
            }
            return Ok(false);
        }
    };
    let corollaries = a.check_corollaries().expect("base already checked");
    let mut reports = identity_reports(&axioms, a.labels());
    reports.extend(identity_reports(&corollaries, a.labels()));
    Ok(print_reports(&reports, machine))
}

fn check_axioms(path: &Path, machine: bool) -> Outcome {
    match load(path)? {
        Definition::Algebroid(spec) => algebroid_axioms(path, &spec.name, spec.to_algebroid(), machine),
        Definition::Algebra(spec) => {
            let f = spec
                .to_algebra()
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            match VirasoroAlgebroid::from_frobenius(&f) {
                Ok(a) => algebroid_axioms(path, &format!("Vir({})", spec.name), Ok(a), machine),
                Err(_) => {
                    if !machine {
                        println!("algebra {} is not Frobenius, so Vir(F) is undefined", spec.name);
                    }
                    print_reports(&[check_frobenius_axioms(&f)], machine);
                    Ok(false)
                }
            }
        }
    }
}

/// Builds `V_F`, or prints the Frobenius violations that prevent it.
fn module(f: FrobeniusAlgebra, cutoff: u32, machine: bool) -> Option<VacuumModule> {
    match VacuumModule::new(f.clone(), cutoff) {
        Ok(v) => Some(v),
        Err(_) => {
            print_reports(&[check_frobenius_axioms(&f)], machine);
            None
        }
    }
}

fn build(path: &Path, degree: u32, machine: bool) -> Outcome {
    let (name, f) = load_algebra(path)?;
    warn_degree(&f, degree);
    let Some(v) = module(f, degree, machine) else {
        return Ok(false);
    };
    if !machine {
        println!("V_F for {name}, degrees 0 to {degree}");
    }
    let labels = v.algebra().labels().to_vec();
    for n in 0..=degree {
        let basis = v.basis(n).expect("degree within cutoff");
        let words: Vec<String> = basis.iter().map(|m| m.describe(&labels)).collect();
        if machine {
            println!("degree\t{n}\tdim={}\tbasis={}", basis.len(), words.join(";"));
        } else {
            println!("degree {n}: dimension {}", basis.len());
            for w in words {
                println!("  {w}");
            }
        }
    }
    Ok(true)
}

fn character_cmd(path: &Path, degree: u32, machine: bool) -> Outcome {
    let (_, f) = load_algebra(path)?;
    warn_degree(&f, degree);
    // The basis only depends on the dimension; enumeration is cross-checked
    // against the closed formula.
    let v = VacuumModule::new_unchecked(f.clone(), degree);
    let report = check_character(&v, degree);
    let dims: Vec<String> = character(&f, degree).iter().map(u128::to_string).collect();
    if machine {
        println!("{}", report.machine_record());
    } else {
        println!("{}", dims.join(" "));
        if !report.passed() {
            println!("{report}");
        }
    }
    Ok(report.passed())
}

fn run_suite(name: &str, f: &FrobeniusAlgebra, degree: u32, machine: bool) -> bool {
    warn_degree(f, degree + 1);
    let suite = run_all(f, degree);
    if machine {
        for rec in suite.machine_records() {
            println!("{rec}");
        }
    } else {
        println!("verify {name}: states up to degree {degree}");
        println!("{suite}");
    }
    suite.passed()
}

fn verify(path: &Path, degree: u32, machine: bool) -> Outcome {
    let (name, f) = load_algebra(path)?;
    Ok(run_suite(&name, &f, degree, machine))
}

fn demo(name: &str, machine: bool) -> Outcome {
    let builtin: Builtin = name.parse().map_err(|e| UsageError(format!("{e}")))?;
    let f = builtin.build();
    let label = builtin.to_string();
    if !machine {
        let spec = AlgebraSpec::from_algebra(&label, &f).expect("built-ins are commutative and symmetric");
        print!("{spec}");
        let dims: Vec<String> = character(&f, DEFAULT_CUTOFF).iter().map(u128::to_string).collect();
        println!("character: {}", dims.join(" "));
    }
    Ok(run_suite(&label, &f, DEFAULT_DEGREE, machine))
}
