use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ramlab", version, about = "Finite-window checks for Ramsey-theoretic set classes")]
pub struct Cli {
    /// Output format of the result document.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a set expression on a window.
    Eval(SetArgs),
    /// Decide a property of a set on a window.
    Check {
        #[command(subcommand)]
        property: CheckCmd,
    },
    /// Generate finite sums, products or arrangement products.
    Gen(GenArgs),
    /// Operations on upward-closed families over a finite universe.
    Family(FamilyArgs),
    /// Verify a chain or tree certificate file.
    Verify(VerifyArgs),
    /// Search for a sum subsystem inside a set.
    Build(BuildArgs),
    /// Check associativity and distributive laws of a ring instance.
    Laws(LawsArgs),
}

#[derive(Args, Debug)]
pub struct SetArgs {
    /// Set expression, e.g. `inter(mod(2,0), pow2blocks)`.
    #[arg(long, required_unless_present = "set_file", conflicts_with = "set_file")]
    pub set: Option<String>,
    /// File holding a set expression.
    #[arg(long)]
    pub set_file: Option<PathBuf>,
    /// Window size N; sets live in [1..N].
    #[arg(long)]
    pub window: u64,
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Is there x with F + x inside the set?
    Thick {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long = "F", value_delimiter = ',', required = true)]
        f: Vec<u64>,
    },
    /// Do the shifts -t + A (t in G) cover the window?
    Syndetic {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long = "G", value_delimiter = ',', required = true)]
        g: Vec<u64>,
    },
    /// Is the union of -t + A (t in G) thick for F?
    Ps {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long = "G", value_delimiter = ',', required = true)]
        g: Vec<u64>,
        #[arg(long = "F", value_delimiter = ',', required = true)]
        f: Vec<u64>,
    },
    /// Look for k terms whose finite sums all lie in the set.
    Ip {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        k: usize,
        /// Largest first term tried.
        #[arg(long)]
        search_bound: Option<u64>,
        #[arg(long, default_value_t = ramlab::properties::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Look for a and H with a + sum f(H) in the set for every f.
    Jset {
        #[command(flatten)]
        set: SetArgs,
        /// Sequence rule (`n`, `2n+1`, `[1,4,9]`); repeat for each f.
        #[arg(long = "fseq", required = true)]
        fseqs: Vec<String>,
        #[arg(long)]
        a_bound: Option<u64>,
        #[arg(long, default_value_t = ramlab::properties::DEFAULT_H_BOUND)]
        h_bound: usize,
        #[arg(long, default_value_t = ramlab::properties::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Look for an arithmetic progression of length k.
    Ap {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        k: usize,
    },
    /// Exact prefix density |A ∩ [1..n]| / n and its running maximum.
    Density {
        #[command(flatten)]
        set: SetArgs,
        /// Prefix length; defaults to the window.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Exact partial sum of 1/m over members m <= n.
    Harmonic {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Fs,
    Fp,
    Ap,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenRing {
    Nat,
    Tropical,
    Mat2,
    Freemon,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Generators: `2,4,16`, `pow2`, `id`, matrices `1;1;0;1` or letters `a,b,c`.
    #[arg(long)]
    pub seq: String,
    #[arg(long, value_enum, default_value_t = GenRing::Nat)]
    pub ring: GenRing,
    /// Prefix length for `pow2` and `id`.
    #[arg(long, default_value_t = 5)]
    pub len: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyOp {
    Ramsey,
    Dual,
    Filter,
    Shift,
    #[value(alias = "cond14")]
    Cond,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub op: FamilyOp,
    /// Family file: universe size, then one minimal set per line.
    #[arg(long)]
    pub file: PathBuf,
    /// Finite semigroup for `shift` and `cond`: `z4` or `z4-mul`.
    #[arg(long)]
    pub semigroup: Option<String>,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    /// Use preimages s^-1 E instead of images s E.
    #[arg(long)]
    pub inverse: bool,
    /// Only split into disjoint parts.
    #[arg(long)]
    pub disjoint_only: bool,
    /// Sample this many partitions instead of enumerating all.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Chain,
    Tree,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub kind: VerifyKind,
    #[arg(long)]
    pub file: PathBuf,
    /// Window for files without a `carrier` line; must match one if present.
    #[arg(long)]
    pub window: Option<u64>,
    /// Dilate the chain by n before verifying.
    #[arg(long)]
    pub dilate: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildRing {
    Nat,
    Tropical,
    Mat2,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value_t = BuildRing::Nat)]
    pub ring: BuildRing,
    /// Source sequence: `pow2`, `id` or an explicit list.
    #[arg(long)]
    pub seq: String,
    /// Target set expression; over mat2 a matrix belongs when its trace does.
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "fs-fp")]
    pub structure: String,
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact search that may report nonexistence within the index bound.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub index_bound: Option<usize>,
}

#[derive(Args, Debug)]
pub struct LawsArgs {
    /// `nat`, `tropical`, `mat2` or `zN` for the integers mod N.
    #[arg(long)]
    pub ring: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
