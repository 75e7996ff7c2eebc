mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dessins_core::Error;

use output::Output;

#[derive(Parser, Debug)]
#[command(name = "dessins", version, about = "Dessins d'enfants as permutation data")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for parallel library calls (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for randomised searches; recorded in the output.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Resource cap: enumeration degree, regular order or H_n level.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Residual tolerance for numerical solving.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Passport, genus, connectivity, group order, automorphisms, regularity.
    Info { dessin: PathBuf },
    /// Whether two dessins are isomorphic, with a dart bijection.
    Iso { a: PathBuf, b: PathBuf },
    /// Automorphism group as permutations of the darts.
    Aut { dessin: PathBuf },
    /// Swap vertices and faces: (σ, α) ↦ (φ, α) up to relabelling.
    Dual { dessin: PathBuf },
    /// Swap the two vertex colours.
    Swap { dessin: PathBuf },
    /// Regular closure with its covering map.
    Closure { dessin: PathBuf },
    /// Quotient of a regular dessin by the subgroup generated by words.
    Quotient {
        dessin: PathBuf,
        /// Subgroup generators as words over s a S A, comma separated.
        #[arg(long, default_value = "")]
        subgroup: String,
    },
    /// All connected dessins with n darts, one JSON line each.
    Enumerate {
        n: usize,
        /// Print the whole catalog document instead of entry lines.
        #[arg(long)]
        catalog: bool,
        /// Skip the on-disk cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Regular dessins of order at most n, one JSON line each.
    RegularCatalog { n: usize },
    /// The group H_n.
    Hn { n: usize },
    /// GT(n) inside Out(H_n).
    Gt { n: usize },
    /// Apply an automorphism of H_n to a dessin.
    Act {
        dessin: PathBuf,
        #[arg(long)]
        level: usize,
        /// theta, delta, id, or WORD,WORD for the images of σ and α.
        #[arg(long)]
        auto: String,
    },
    /// Genus-0 Belyi maps.
    #[command(subcommand)]
    Belyi(BelyiCommand),
}

#[derive(Subcommand, Debug)]
pub enum BelyiCommand {
    /// Solve the polynomial system for a planar dessin or a passport.
    Solve {
        /// Planar dessin whose passport is solved for.
        dessin: Option<PathBuf>,
        /// Passport as BLACK/WHITE/FACES, e.g. 4,2,1/2,2,1,1,1/7.
        #[arg(long, conflicts_with = "dessin")]
        passport: Option<String>,
        /// Degree of the black vertex placed at 0.
        #[arg(long)]
        pin_black: Option<usize>,
        /// Degree of the white vertex placed at 1.
        #[arg(long)]
        pin_white: Option<usize>,
        /// Degree of the face placed at infinity.
        #[arg(long)]
        infinity_face: Option<usize>,
        /// Also snap each candidate to rationals and check it exactly.
        #[arg(long)]
        exact: bool,
        /// Print the polynomial system instead of solving it.
        #[arg(long)]
        show_system: bool,
    },
    /// Shabat polynomial of a planar tree.
    Tree { dessin: PathBuf },
    /// Monodromy of a rational fraction, as a dessin.
    Monodromy { fraction: PathBuf },
    /// Whether the monodromy of a fraction is the given dessin.
    Verify { dessin: PathBuf, fraction: PathBuf },
    /// SVG drawing of the preimage of [0, 1].
    Svg {
        fraction: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 512)]
        size: u32,
    },
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(1);
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("{}", error_json("threads", &e.to_string()));
            return ExitCode::from(1);
        }
    }
    match commands::run(cli.command, &cli.global) {
        Ok(out) => {
            out.print(cli.global.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_resource_limit() {
        2
    } else {
        1
    }
}

impl Output {
    fn print(&self, format: Format) {
        print!("{}", self.render(format));
    }
}
