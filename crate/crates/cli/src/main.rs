use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ktree_subdiv::homology::{reduced_homology, ReducedHomology};
use ktree_subdiv::ktrees::ktree_complex;
use ktree_subdiv::partition::{GSet, PartitionPoset};
use ktree_subdiv::subdivision::equivariance::{check_equivariance, complex_invariance, PermutationSample};
use ktree_subdiv::subdivision::{CheckResult, Verdict};
use ktree_subdiv::{verify_theorem, Error, KInstance, Partition, SimplicialComplex, VerifyOptions};

const OUT_DIR_VAR: &str = "KTREE_SUBDIV_OUT_DIR";

#[derive(Parser)]
#[command(name = "ktree-subdiv", version, about = "Partition posets, complexes of k-trees and their subdivision")]
struct Cli {
    /// Worker threads for the library (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Where to write the JSON artifact. Defaults to $KTREE_SUBDIV_OUT_DIR/<name>.json when that is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    max_elements: u64,
    #[arg(long, global = true, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_faces: u64,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Object {
    PiK,
    KtreeComplex,
    OrderComplex,
    GSet,
}

impl Object {
    fn name(self) -> &'static str {
        match self {
            Object::PiK => "pi-k",
            Object::KtreeComplex => "ktree-complex",
            Object::OrderComplex => "order-complex",
            Object::GSet => "g-set",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one object and export it as JSON.
    Enumerate {
        #[arg(long, value_enum)]
        object: Object,
        #[command(flatten)]
        size: Size,
    },
    /// Check that Δ(Π^(k)_m) subdivides T^k_n.
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Distinct linear extensions to run the stellar sequence on.
        #[arg(long, default_value_t = 1)]
        extensions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random permutations for the equivariance spot check.
        #[arg(long, default_value_t = 8)]
        equivariance_sample: usize,
        #[arg(long)]
        skip_lemmas: bool,
    },
    /// Reduced integral homology.
    Homology {
        #[arg(long, value_enum, default_value_t = Object::OrderComplex)]
        object: Object,
        #[command(flatten)]
        size: Size,
        /// Both complexes side by side, with the top-degree comparison.
        #[arg(long)]
        compare: bool,
    },
    /// S_m-equivariance of the carrier map.
    Equivariance {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Permutations to sample when m > 5.
        #[arg(long, default_value_t = 200)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, conflicts_with = "sample")]
        identity_only: bool,
        /// Also check invariance of a complex read from this JSON file.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Size {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

impl Size {
    fn k(&self) -> Result<usize, Error> {
        match self.k {
            Some(0) | None => Err(Error::InvalidArgument("--k must be at least 1".into())),
            Some(k) => Ok(k),
        }
    }

    /// Ground-set size from `--m`, or from `--n` as `(n-1)k+1`.
    fn m(&self) -> Result<usize, Error> {
        let k = self.k()?;
        match (self.m, self.n) {
            (Some(m), _) if m >= 1 => Ok(m),
            (Some(m), _) => Err(Error::InvalidArgument(format!("--m must be at least 1, got {m}"))),
            (None, Some(n)) if n >= 1 => Ok((n - 1) * k + 1),
            _ => Err(Error::InvalidArgument("give --m or --n".into())),
        }
    }

    /// Leaf-count parameter from `--n`, or from `--m ≡ 1 (mod k)`.
    fn n(&self) -> Result<usize, Error> {
        let k = self.k()?;
        match (self.n, self.m) {
            (Some(n), _) => Ok(n),
            (None, Some(m)) if m >= 1 && (m - 1) % k == 0 => Ok((m - 1) / k + 1),
            (None, Some(m)) => Err(Error::InvalidArgument(format!("m = {m} is not 1 mod {k}"))),
            _ => Err(Error::InvalidArgument("give --n or --m".into())),
        }
    }
}

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    max_elements: usize,
    max_faces: usize,
    verbose: u8,
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Ctx {
    fn artifact_path(&self, default_name: &str) -> Option<PathBuf> {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_VAR).map(|d| Path::new(&d).join(default_name)))
    }

    fn write_artifact(&self, default_name: &str, value: &Value) -> Result<(), Failure> {
        if let Some(path) = self.artifact_path(default_name) {
            let mut text = serde_json::to_string_pretty(value).expect("json renders");
            text.push('\n');
            fs::write(&path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            if self.verbose > 0 {
                eprintln!("wrote {}", path.display());
            }
        }
        Ok(())
    }

    fn emit(&self, value: &Value, text: &str) {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json renders")),
            Format::Text => print!("{text}"),
        }
    }
}

fn f_vector_text(f: &[usize]) -> String {
    let parts: Vec<String> = f.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn instance(ctx: &Ctx, k: usize, n: usize) -> Result<KInstance, Error> {
    KInstance::new(k, n, ctx.max_elements)
}

fn order_complex(ctx: &Ctx, size: &Size) -> Result<SimplicialComplex<Partition>, Error> {
    let poset = PartitionPoset::enumerate(size.m()?, size.k()?, ctx.max_elements)?;
    poset.poset().order_complex_capped(ctx.max_faces)
}

fn target_complex(ctx: &Ctx, size: &Size) -> Result<SimplicialComplex<Partition>, Error> {
    let inst = instance(ctx, size.k()?, size.n()?)?;
    ktree_complex(&inst, ctx.max_faces)
}

fn cmd_enumerate(ctx: &Ctx, object: Object, size: &Size) -> Result<bool, Failure> {
    let k = size.k()?;
    let (value, text, tag) = match object {
        Object::PiK => {
            let m = size.m()?;
            let p = PartitionPoset::enumerate(m, k, ctx.max_elements)?;
            let text = format!("pi-k m={m} k={k}: {} elements\n", p.len());
            (p.to_json(), text, format!("m{m}-k{k}"))
        }
        Object::GSet => {
            let m = size.m()?;
            let g = GSet::new(m, k)?;
            let value = json!({ "m": m, "k": k, "elements": g.elements() });
            (value, format!("g-set m={m} k={k}: {} elements\n", g.len()), format!("m{m}-k{k}"))
        }
        Object::OrderComplex => {
            let m = size.m()?;
            let c = order_complex(ctx, size)?;
            let text = format!(
                "order-complex m={m} k={k}: {} vertices, {} faces, f-vector {}\n",
                c.num_vertices(),
                c.num_faces(),
                f_vector_text(&c.f_vector())
            );
            (c.to_json(), text, format!("m{m}-k{k}"))
        }
        Object::KtreeComplex => {
            let n = size.n()?;
            let c = target_complex(ctx, size)?;
            let text = format!(
                "ktree-complex n={n} k={k}: {} vertices, {} faces, f-vector {}\n",
                c.num_vertices(),
                c.num_faces(),
                f_vector_text(&c.f_vector())
            );
            (c.to_json(), text, format!("n{n}-k{k}"))
        }
    };
    ctx.write_artifact(&format!("{}-{tag}.json", object.name()), &value)?;
    let summary = match &value {
        Value::Object(o) if o.contains_key("facets") => {
            json!({ "object": object.name(), "vertices": o["vertices"].as_array().map_or(0, Vec::len), "facets": o["facets"].as_array().map_or(0, Vec::len), "data": value })
        }
        _ => json!({ "object": object.name(), "data": value }),
    };
    ctx.emit(&summary, &text);
    Ok(true)
}

fn homology_text(name: &str, h: &ReducedHomology) -> String {
    let mut s = format!("{name}\n  degree  betti  torsion\n");
    for (d, g) in h.groups.iter().enumerate() {
        let t: Vec<String> = g.torsion.iter().map(|x| format!("Z/{x}")).collect();
        let t = if t.is_empty() { "-".to_string() } else { t.join(" ") };
        s.push_str(&format!("  {d:>6}  {:>5}  {t}\n", g.betti));
    }
    s
}

fn cmd_homology(ctx: &Ctx, object: Object, size: &Size, compare: bool) -> Result<bool, Failure> {
    if compare {
        let (k, n) = (size.k()?, size.n()?);
        let inst = instance(ctx, k, n)?;
        let source = inst.poset.poset().order_complex_capped(ctx.max_faces)?;
        let target = ktree_complex(&inst, ctx.max_faces)?;
        let hs = reduced_homology(&source)?;
        let ht = reduced_homology(&target)?;
        let top = n - 3;
        let equal = hs.betti(top) == ht.betti(top);
        let value = json!({
            "k": k, "n": n, "m": inst.m, "degree": top,
            "order_complex": hs, "ktree_complex": ht,
            "top_ranks_equal": equal,
        });
        let mut text = homology_text(&format!("order complex of pi-k, m={}", inst.m), &hs);
        text.push_str(&homology_text(&format!("ktree complex, n={n}"), &ht));
        text.push_str(&format!(
            "degree {top}: {} vs {} -> {}\n",
            hs.betti(top),
            ht.betti(top),
            if equal { "equal" } else { "different" }
        ));
        ctx.write_artifact(&format!("homology-compare-n{n}-k{k}.json"), &value)?;
        ctx.emit(&value, &text);
        return Ok(equal);
    }
    let c = match object {
        Object::OrderComplex => order_complex(ctx, size)?,
        Object::KtreeComplex => target_complex(ctx, size)?,
        other => return Err(Failure::Usage(format!("no homology for object {}", other.name()))),
    };
    let h = reduced_homology(&c)?;
    let value = json!({ "object": object.name(), "f_vector": c.f_vector(), "reduced_homology": h });
    let text = homology_text(&format!("{} f-vector {}", object.name(), f_vector_text(&c.f_vector())), &h);
    ctx.write_artifact(&format!("homology-{}.json", object.name()), &value)?;
    ctx.emit(&value, &text);
    Ok(true)
}

fn cmd_verify(ctx: &Ctx, k: usize, n: usize, opts: VerifyOptions) -> Result<bool, Failure> {
    let report = verify_theorem(k, n, &opts)?;
    let value = report.to_json();
    ctx.write_artifact(&format!("verify-n{n}-k{k}.json"), &value)?;
    ctx.emit(&value, &report.to_text());
    Ok(report.passed())
}

fn read_complex(path: &Path, m: usize) -> Result<SimplicialComplex<Partition>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let c = SimplicialComplex::<Partition>::from_json(value)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(x) = c.labels().iter().find(|x| x.ground_size() != m) {
        return Err(Failure::Usage(format!("{}: vertex {x} is not a partition of 1..{m}", path.display())));
    }
    Ok(c)
}

fn cmd_equivariance(
    ctx: &Ctx,
    k: usize,
    n: usize,
    sample: PermutationSample,
    complex: Option<&Path>,
) -> Result<bool, Failure> {
    let inst = instance(ctx, k, n)?;
    let extra = complex.map(|p| read_complex(p, inst.m)).transpose()?;
    let sample = match sample {
        PermutationSample::Sample { .. } if inst.m <= 5 => PermutationSample::All,
        s => s,
    };
    let mut report = check_equivariance(k, n, &sample, ctx.max_elements, ctx.max_faces)?;
    if let Some(c) = extra {
        let perms = sample.permutations(inst.m)?;
        report.checks.push(CheckResult::from_witness("file-complex-invariant", complex_invariance(&c, &perms)));
        report.verdict = Verdict::of(&report.checks);
    }
    let value = serde_json::to_value(&report).expect("report serialises");
    let mut text = format!(
        "equivariance k={k} n={n} m={}: {} permutations\ntop reduced betti (degree {}): {} vs {}\n",
        report.m,
        report.permutations_tested,
        n - 3,
        report.source_top_betti,
        report.target_top_betti
    );
    for c in &report.checks {
        text.push_str(&format!("{c}\n"));
    }
    text.push_str(if report.passed() { "verdict: pass\n" } else { "verdict: fail\n" });
    ctx.write_artifact(&format!("equivariance-n{n}-k{k}.json"), &value)?;
    ctx.emit(&value, &text);
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx {
        format: cli.format,
        out: cli.out,
        max_elements: usize::try_from(cli.max_elements).unwrap_or(usize::MAX),
        max_faces: usize::try_from(cli.max_faces).unwrap_or(usize::MAX),
        verbose: cli.verbose,
    };
    let start = Instant::now();
    let outcome = match cli.cmd {
        Cmd::Enumerate { object, size } => cmd_enumerate(&ctx, object, &size),
        Cmd::Verify { k, n, extensions, seed, equivariance_sample, skip_lemmas } => {
            let opts = VerifyOptions {
                extensions: extensions.max(1),
                seed,
                element_cap: ctx.max_elements,
                face_cap: ctx.max_faces,
                equivariance_sample,
                lemmas: !skip_lemmas,
            };
            cmd_verify(&ctx, k, n, opts)
        }
        Cmd::Homology { object, size, compare } => cmd_homology(&ctx, object, &size, compare),
        Cmd::Equivariance { k, n, sample, seed, identity_only, complex } => {
            let sample = if identity_only {
                PermutationSample::Identity
            } else {
                PermutationSample::Sample { count: sample, seed }
            };
            cmd_equivariance(&ctx, k, n, sample, complex.as_deref())
        }
    };
    if ctx.verbose > 0 {
        eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Lib(e @ Error::ResourceLimit { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
