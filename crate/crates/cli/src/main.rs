use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exact Ext¹ computations for Drinfeld modules and Anderson t-modules.
#[derive(Parser, Debug)]
#[command(name = "drinfeld-ext", version)]
pub struct Cli {
    /// Coefficient field, e.g. "GF(3)(th)", "GF(3^2; mod=g^2+1)",
    /// "FTF(3; gens=a,b,th; inv=a)".
    #[arg(long, global = true, default_value = "GF(3)(th)")]
    pub field: String,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

/// Source and target of Ext¹(φ, ψ).
#[derive(Args, Debug, Clone)]
pub struct Pair {
    /// Source module: "th + tau^3", "carlitz e=2", "tmodule dim=2 <matrix>".
    #[arg(long)]
    pub phi: String,
    /// Target module.
    #[arg(long)]
    pub psi: String,
    /// Read modules and matrices as σ-polynomials.
    #[arg(long)]
    pub sigma: bool,
}

#[derive(Args, Debug, Clone)]
pub struct WithDelta {
    #[command(flatten)]
    pub pair: Pair,
    /// Biderivation δ_t, a polynomial or a matrix.
    #[arg(long)]
    pub delta: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// canonical(Ψ_t·w) against Π_t on coordinates.
    Structure,
    /// 0 → Ext¹₀ → Ext¹ → 𝔾ₐ^s → 0.
    Ga,
    /// Hom(G,-)/Ext¹(G,-) sequence of δ.
    SixtermCov,
    /// Hom(-,G)/Ext¹(-,G) sequence of δ.
    SixtermCon,
    /// τ/σ adjoint duality.
    Duality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sample,
    Enumerate,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Structure matrix Π_t of Ext¹(φ, ψ).
    Ext(Pair),
    /// Π⁰_t of the subextension Ext¹₀.
    Ext0(Pair),
    /// The sequence 0 → Ext¹₀ → Ext¹ → 𝔾ₐ^s → 0.
    ExtSeq(Pair),
    /// Ext¹ of products; repeat --phi and --psi for each factor.
    ExtProd {
        #[arg(long, required = true)]
        phi: Vec<String>,
        #[arg(long, required = true)]
        psi: Vec<String>,
    },
    /// Ext¹(Φ, ψ) for a t-module source with invertible leading matrix.
    ExtTmod(Pair),
    /// Ext¹(Φ, C^⊗e).
    ExtCarlitz {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        e: usize,
    },
    /// Ext¹_τ(φ, ψ) with rk φ < rk ψ, computed on the σ-side.
    ExtDual {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        /// Rewrite the result with negated twist indices (formal fields).
        #[arg(long)]
        negate: bool,
    },
    /// Adjoint of a polynomial or matrix (--delta) or of a module (--phi).
    Adjoint {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, conflicts_with = "delta")]
        phi: Option<String>,
        #[arg(long)]
        sigma: bool,
    },
    /// Canonical form of δ and the witness U with δ = canonical + δ^(U).
    Reduce(WithDelta),
    /// Middle term [[Φ_t, 0], [δ_t, Ψ_t]] of the extension.
    Assemble(WithDelta),
    /// Baer sum of two classes; pass --delta twice.
    Baer {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, num_args = 1, required = true)]
        delta: Vec<String>,
    },
    /// a * δ for a ∈ F_q[t].
    Act {
        #[command(flatten)]
        d: WithDelta,
        /// Polynomial in t, e.g. "t^2 + 1".
        #[arg(long)]
        a: String,
    },
    /// Pullback of δ along a morphism g: G → φ.
    Pullback {
        #[command(flatten)]
        d: WithDelta,
        /// Matrix of g.
        #[arg(long, visible_alias = "map")]
        g: String,
        /// Source G of g; defaults to φ.
        #[arg(long)]
        from: Option<String>,
    },
    /// Pushout of δ along a morphism f: ψ → G.
    Pushout {
        #[command(flatten)]
        d: WithDelta,
        /// Matrix of f.
        #[arg(long, visible_alias = "map")]
        f: String,
        /// Target G of f; defaults to ψ.
        #[arg(long)]
        to: Option<String>,
    },
    /// Decide whether δ is inner.
    Split {
        #[command(flatten)]
        d: WithDelta,
        /// Witness degree bound for the linear search.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Hom(φ, ψ) up to a degree bound.
    Hom {
        #[command(flatten)]
        pair: Pair,
        /// Degree bound; defaults to twice the larger dimension.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Ext¹(X, G) for the extension X of φ by ψ given by δ.
    Sixterm {
        #[command(flatten)]
        d: WithDelta,
        /// Test module G.
        #[arg(long, default_value = "carlitz")]
        g: String,
    },
    /// Brute-force verification over a finite field.
    Verify {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, value_enum, default_value_t = Check::Structure)]
        check: Check,
        /// δ for the six-term checks.
        #[arg(long)]
        delta: Option<String>,
        /// G for the six-term checks.
        #[arg(long, default_value = "carlitz")]
        g: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Sample)]
        mode: ModeArg,
        /// Degree bound for Hom searches.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match commands::run(&cli) {
        Ok(out) => (out.text, if out.verified { 0 } else { 3 }),
        Err(err) => {
            eprintln!("error[{}]: {}", err.code(), err);
            return ExitCode::from(err.exit_code());
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error[Io]: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
