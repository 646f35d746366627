use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use tbasis::algebra::{certify_hom, check_algebra, AlgebraRef};
use tbasis::bialgebra::{
    determinize, fcoalgebra_dot, free_bialgebra_from_generator, ftcoalgebra_dot, generated_coalgebra, DetMode, Outputs,
};
use tbasis::generator::{
    atoms_generator, birkhoff_basis, canonical_free_basis, certify, identity_generator, join_irreducible_generator, search_basis,
    GeneratorTriple, Status,
};
use tbasis::json;
use tbasis::kleisli::{associated_morphism, change_of_basis, check_representation, render_matrix, KleisliMorphism};
use tbasis::laws::check_monad_laws;
use tbasis::rfsa::{canonical_rfsa, check_equivalence, nfa_to_min_dfa, render_word, Equivalence};
use tbasis::{Carrier, Certificate, Error, Mode, Opts, Report};

#[derive(Parser)]
#[command(name = "tbasis", version, about = "Generators and bases of algebras over finite monads")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Ceiling on the size of any single enumeration.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    max_enum: u64,
    /// `exhaustive` or `sampled:N`.
    #[arg(long, global = true, default_value = "exhaustive")]
    mode: String,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest denominator when enumerating distributions.
    #[arg(long, global = true, default_value_t = 6)]
    max_den: u32,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Unit and associativity laws of a monad on a small carrier.
    CheckMonad {
        /// powerset, downset, neighbourhood, distribution, multiset:boolean, multiset:f2, list:N
        monad: String,
        #[arg(long, default_value_t = 2)]
        size: usize,
        /// Carrier JSON; overrides --size. Downsets default to a chain.
        #[arg(long)]
        carrier: Option<PathBuf>,
    },
    /// Eilenberg-Moore laws of an algebra.
    CheckAlgebra { file: PathBuf },
    /// Generator and basis laws of a triple given with its algebra.
    CheckBasis { file: PathBuf },
    /// All bases with at most --max-y generators.
    SearchBasis {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_y: usize,
    },
    /// A generator of an algebra by a named construction.
    FindGenerator {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::JoinIrreducibles)]
        method: Method,
    },
    /// Kleisli representation of a homomorphism in two bases, or the
    /// homomorphism of a Kleisli morphism.
    Represent { file: PathBuf },
    /// Change of basis for a represented homomorphism.
    ChangeBasis { file: PathBuf },
    /// Determinisation of an FT-coalgebra into a bialgebra.
    Determinize {
        file: PathBuf,
        /// Only the part reachable from the unit of this state.
        #[arg(long)]
        reachable: Option<String>,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// The free bialgebra of the determinised coalgebra along a generator.
    FreeBialgebra {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BialgebraGenerator::Canonical)]
        generator: BialgebraGenerator,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Canonical residual finite state automaton of an NFA.
    CanonicalRfsa {
        file: PathBuf,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        /// Re-check language equality and minimal DFAs from scratch.
        #[arg(long)]
        verify: bool,
    },
    /// Language equivalence of two NFAs.
    Equiv { first: PathBuf, second: PathBuf },
    /// Matrix view of a multiset Kleisli morphism.
    RenderMatrix { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    JoinIrreducibles,
    Birkhoff,
    Atoms,
    Identity,
    Search,
}

#[derive(Clone, Copy, ValueEnum)]
enum BialgebraGenerator {
    /// `(X, η, id)` on the free algebra of states.
    Canonical,
    /// The whole carrier.
    Identity,
    JoinIrreducibles,
}

#[derive(Serialize)]
struct CommandReport {
    command: String,
    status: &'static str,
    certificates: Vec<Certificate>,
    artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorReport>,
    #[serde(skip)]
    lines: Vec<String>,
}

#[derive(Serialize)]
struct ErrorReport {
    code: u8,
    message: String,
}

/// Intermediate result of a subcommand.
#[derive(Default)]
struct Outcome {
    report: Report,
    lines: Vec<String>,
    result: Value,
    artifacts: Vec<String>,
}

impl Outcome {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ExplosionGuard { .. } => 3,
        Error::Invalid(_) | Error::UnknownElement(_) | Error::MalformedNesting(_) | Error::CarrierMismatch(_) | Error::NotApplicable(_) => 2,
        _ => 1,
    }
}

fn parse_mode(s: &str, seed: u64) -> Result<Mode, Error> {
    if s == "exhaustive" {
        return Ok(Mode::Exhaustive);
    }
    let n = s
        .strip_prefix("sampled:")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Invalid(format!("mode `{s}`: expected exhaustive or sampled:N")))?;
    Ok(Mode::sampled(n, seed))
}

fn load(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    json::parse(&text)
}

fn write_artifact(out: &mut Outcome, path: &Path, content: &str) -> Result<(), Error> {
    std::fs::write(path, content).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    out.artifacts.push(path.display().to_string());
    Ok(())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| Error::Invalid(format!("missing field `{key}`")))
}

fn load_algebra(v: &Value, opts: &Opts) -> Result<AlgebraRef, Error> {
    // Either the algebra itself or a document with an `algebra` field.
    let a = v.get("algebra").unwrap_or(v);
    Ok(Arc::new(json::algebra_from_json(a, opts)?))
}

fn status_word(g: &GeneratorTriple) -> &'static str {
    match g.status {
        Status::Basis => "basis",
        Status::Generator => "generator",
        Status::Unchecked => "not a generator",
    }
}

fn certified_basis(alg: &AlgebraRef, v: &Value, what: &str, opts: &Opts) -> Result<GeneratorTriple, Error> {
    let (g, r) = certify(json::triple_from_json(alg, v)?, opts)?;
    if g.status != Status::Basis {
        let c = r.first_failure().cloned();
        return Err(Error::LawFailed {
            law: format!("{what}: {}", c.as_ref().map_or("basis", |c| c.law.as_str())),
            witness: c.and_then(|c| c.witness).unwrap_or_default(),
        });
    }
    Ok(g)
}

fn hom_table(source: &AlgebraRef, target: &AlgebraRef, v: &Value) -> Result<Vec<usize>, Error> {
    let o = v.as_object().ok_or_else(|| Error::Invalid("hom is an object".into()))?;
    source
        .carrier
        .names()
        .iter()
        .map(|n| {
            let t = o.get(n).and_then(Value::as_str).ok_or_else(|| Error::Invalid(format!("hom undefined at `{n}`")))?;
            target.carrier.index_of(t)
        })
        .collect()
}

fn kleisli_lines(out: &mut Outcome, k: &KleisliMorphism) {
    for l in k.render().lines() {
        out.line(format!("  {l}"));
    }
    if let Ok(m) = render_matrix(k) {
        out.line("matrix:");
        for l in m.lines() {
            out.line(format!("  {l}"));
        }
    }
}

fn run(cmd: &Command, opts: &Opts) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    match cmd {
        Command::CheckMonad { monad, size, carrier } => {
            let m = json::monad_from_name(monad)?;
            let x = match carrier {
                Some(p) => json::carrier_from_json(&load(p)?)?,
                None => {
                    let c = Carrier::new((0..*size).map(|i| format!("x{i}")))?;
                    if matches!(m, tbasis::Monad::Downset) {
                        c.with_leq(|a, b| a <= b)
                    } else {
                        c
                    }
                }
            };
            out.line(format!("monad: {m}, |X| = {}", x.len()));
            out.report = check_monad_laws(&m, &x, opts)?;
        }
        Command::CheckAlgebra { file } => {
            let alg = load_algebra(&load(file)?, opts)?;
            out.line(format!("algebra: {} on {} elements, rule {}", alg.monad, alg.len(), alg.structure.rule_name()));
            out.report = check_algebra(&alg, opts)?;
        }
        Command::CheckBasis { file } => {
            let v = load(file)?;
            let alg = load_algebra(&v, opts)?;
            let t = v.get("triple").unwrap_or(&v);
            let (g, r) = certify(json::triple_from_json(&alg, t)?, opts)?;
            out.line(format!("verdict: {} ({})", status_word(&g), g.mode));
            out.report = r;
            // Failing basis laws are the verdict, not an error, once the generator law holds.
            if g.status != Status::Unchecked {
                out.report.certificates.retain(|c| c.holds() || !c.law.starts_with("basis"));
                if g.status == Status::Generator {
                    let basis = certify_basis_witness(&g, opts)?;
                    out.line(format!("basis check rejects: {basis}"));
                }
            }
            out.result = json::triple_to_json(&g);
        }
        Command::SearchBasis { file, max_y } => {
            let alg = load_algebra(&load(file)?, opts)?;
            let found = search_basis(&alg, *max_y, opts)?;
            out.line(format!("bases with |Y| ≤ {max_y}: {}", found.len()));
            for g in &found {
                let i: Vec<&str> = g.i.iter().map(|&x| alg.carrier.name(x)).collect();
                out.line(format!("  Y ↦ {{{}}}", i.join(", ")));
            }
            out.result = Value::Array(found.iter().map(json::triple_to_json).collect());
        }
        Command::FindGenerator { file, method } => {
            let alg = load_algebra(&load(file)?, opts)?;
            let (g, r) = match method {
                Method::JoinIrreducibles => join_irreducible_generator(&alg, opts)?,
                Method::Atoms => atoms_generator(&alg, opts)?,
                Method::Birkhoff => certify(birkhoff_basis(&alg, opts)?, opts)?,
                Method::Identity => certify(identity_generator(&alg, opts)?, opts)?,
                Method::Search => {
                    let found = search_basis(&alg, alg.len(), opts)?;
                    let g = found.into_iter().next().ok_or_else(|| Error::NoSolution("no basis exists".into()))?;
                    certify(g, opts)?
                }
            };
            let i: Vec<&str> = g.i.iter().map(|&x| alg.carrier.name(x)).collect();
            out.line(format!("Y ↦ {{{}}}: {}", i.join(", "), status_word(&g)));
            out.report = r;
            out.report.certificates.retain(|c| c.holds() || !c.law.starts_with("basis"));
            out.result = json::triple_to_json(&g);
        }
        Command::Represent { file } => {
            let v = load(file)?;
            let source = Arc::new(json::algebra_from_json(field(&v, "source")?, opts)?);
            let target = match v.get("target") {
                Some(t) => Arc::new(json::algebra_from_json(t, opts)?),
                None => source.clone(),
            };
            let alpha = certified_basis(&source, field(&v, "alpha")?, "α", opts)?;
            let beta = match v.get("beta") {
                Some(b) => certified_basis(&target, b, "β", opts)?,
                None => alpha.clone(),
            };
            if let Some(k) = v.get("kleisli") {
                let mut k = k.clone();
                k["monad"] = json::monad_to_json(&source.monad);
                k["domain"] = json::carrier_to_json(&alpha.y);
                k["codomain"] = json::carrier_to_json(&beta.y);
                let p = json::kleisli_from_json(&k)?;
                let f = associated_morphism(&p, &alpha, &beta, opts)?;
                out.line("associated homomorphism:");
                for x in source.carrier.elements() {
                    out.line(format!("  {} ↦ {}", source.carrier.name(x), target.carrier.name(f.map[x])));
                }
                out.report = f.certificate.clone();
                let (_, r) = check_representation(&f, &alpha, &beta, opts)?;
                out.report.extend(r);
            } else {
                let f = certify_hom(source.clone(), target.clone(), hom_table(&source, &target, field(&v, "hom")?)?, opts)?;
                let (rep, r) = check_representation(&f, &alpha, &beta, opts)?;
                out.line("f_{αβ}:");
                kleisli_lines(&mut out, &rep);
                out.report = f.certificate.clone();
                out.report.extend(r);
                out.result = json::kleisli_to_json(&rep);
            }
        }
        Command::ChangeBasis { file } => {
            let v = load(file)?;
            let source = Arc::new(json::algebra_from_json(field(&v, "source")?, opts)?);
            let target = match v.get("target") {
                Some(t) => Arc::new(json::algebra_from_json(t, opts)?),
                None => source.clone(),
            };
            let alpha = certified_basis(&source, field(&v, "alpha")?, "α", opts)?;
            let alpha2 = certified_basis(&source, field(&v, "alpha2")?, "α′", opts)?;
            let beta = match v.get("beta") {
                Some(b) => certified_basis(&target, b, "β", opts)?,
                None => alpha.clone(),
            };
            let beta2 = match v.get("beta2") {
                Some(b) => certified_basis(&target, b, "β′", opts)?,
                None => alpha2.clone(),
            };
            let f = certify_hom(source.clone(), target.clone(), hom_table(&source, &target, field(&v, "hom")?)?, opts)?;
            let c = change_of_basis(&f, &alpha, &alpha2, &beta, &beta2, opts)?;
            out.line("p = d_α∘i_α′:");
            kleisli_lines(&mut out, &c.p);
            out.line("q = d_β′∘i_β:");
            kleisli_lines(&mut out, &c.q);
            out.report = c.report;
            out.result = json!({ "p": json::kleisli_to_json(&c.p), "q": json::kleisli_to_json(&c.q) });
        }
        Command::Determinize { file, reachable, emit_dot } => {
            let (ft, outputs) = json::ftcoalgebra_from_json(&load(file)?, opts)?;
            let law = canonical_law_for(&ft, &outputs, opts)?;
            let mode = match reachable {
                Some(s) => DetMode::Reachable(vec![ft.monad.unit(&*ft.carrier, &ft.carrier.index_of(s)?)?]),
                None => DetMode::Full,
            };
            let b = determinize(&ft, &law, mode, opts)?;
            out.line(format!("states: {}{}", b.algebra.len(), if b.partial { " (reachable part)" } else { "" }));
            let c = &b.coalgebra;
            for p in c.carrier.elements() {
                let next: Vec<String> = c
                    .alphabet
                    .elements()
                    .map(|a| format!("{}→{}", c.alphabet.name(a), c.carrier.name(c.trans[p][a])))
                    .collect();
                out.line(format!("  {} [{}] {}", c.carrier.name(p), outputs.render(&c.out[p]), next.join(" ")));
            }
            out.report = law.certificate.clone();
            out.report.extend(b.certificate.clone());
            if let Some(path) = emit_dot {
                write_artifact(&mut out, path, &fcoalgebra_dot(c, &outputs))?;
            }
        }
        Command::FreeBialgebra { file, generator, emit_dot } => {
            let (ft, outputs) = json::ftcoalgebra_from_json(&load(file)?, opts)?;
            let law = canonical_law_for(&ft, &outputs, opts)?;
            let b = determinize(&ft, &law, DetMode::Full, opts)?;
            let g = match generator {
                BialgebraGenerator::Canonical => canonical_free_basis(&ft.monad, &ft.carrier, opts)?,
                BialgebraGenerator::Identity => identity_generator(&b.algebra, opts)?,
                BialgebraGenerator::JoinIrreducibles => join_irreducible_generator(&b.algebra, opts)?.0,
            };
            let fb = free_bialgebra_from_generator(&b, &g, opts)?;
            out.line(format!("generator: |Y| = {} ({})", g.y.len(), status_word(&g)));
            out.line(format!("free bialgebra: {} states", fb.bialgebra.algebra.len()));
            out.report = b.certificate.clone();
            out.report.extend(fb.report.clone());
            let gen = generated_coalgebra(&b, &g)?;
            out.result = json::ftcoalgebra_to_json(&gen, &outputs);
            if let Some(path) = emit_dot {
                write_artifact(&mut out, path, &ftcoalgebra_dot(&gen, &outputs))?;
            }
        }
        Command::CanonicalRfsa { file, emit_dot, verify } => {
            let nfa = json::nfa_from_json(&load(file)?)?;
            let r = canonical_rfsa(&nfa, opts)?;
            let mp = &r.minimal;
            out.line(format!("minimal DFA: {} states", mp.lattice.dfa.states.len()));
            out.line(format!("unions of residuals: {}", mp.lattice.union_closure.len()));
            out.line(format!("canonical RFSA: {} states ({})", r.nfa.states.len(), status_word(&r.generator)));
            out.report = mp.bialgebra.certificate.clone();
            out.report.extend(r.report.clone());
            if *verify {
                let fresh = json::nfa_from_json(&load(file)?)?;
                let verdict = check_equivalence(&fresh, &r.nfa)?;
                let witness = match &verdict {
                    Equivalence::Equal => None,
                    Equivalence::Separated(w) => Some(render_word(&fresh.alphabet, w)),
                };
                out.line(format!("verify: {}", if witness.is_none() { "EQUAL" } else { "DIFFERENT" }));
                out.report.push("verify: language equality", "exhaustive", 1, witness);
                let same = nfa_to_min_dfa(&fresh) == nfa_to_min_dfa(&r.nfa);
                out.report
                    .push("verify: same minimal DFA", "exhaustive", 1, (!same).then(|| "minimal DFAs differ".to_string()));
            }
            out.result = json::nfa_to_json(&r.nfa);
            if let Some(path) = emit_dot {
                write_artifact(&mut out, path, &r.nfa.to_dot())?;
            }
        }
        Command::Equiv { first, second } => {
            let a = json::nfa_from_json(&load(first)?)?;
            let b = json::nfa_from_json(&load(second)?)?;
            match check_equivalence(&a, &b)? {
                Equivalence::Equal => {
                    out.line("EQUAL");
                    out.result = json!({ "verdict": "EQUAL" });
                    out.report.push("language equality", "exhaustive", 1, None);
                }
                Equivalence::Separated(w) => {
                    let word = render_word(&a.alphabet, &w);
                    out.line(format!("DIFFERENT, separated by {word}"));
                    out.result = json!({ "verdict": "DIFFERENT", "word": word });
                    out.report.push("language equality", "exhaustive", 1, Some(word));
                }
            }
        }
        Command::RenderMatrix { file } => {
            let k = json::kleisli_from_json(&load(file)?)?;
            for l in render_matrix(&k)?.lines() {
                out.line(l.to_string());
            }
        }
    }
    Ok(out)
}

/// The witness of the failing basis law, recomputed for display.
fn certify_basis_witness(g: &GeneratorTriple, opts: &Opts) -> Result<String, Error> {
    let r = tbasis::generator::check_basis(g, opts)?;
    Ok(r.first_failure().and_then(|c| c.witness.clone()).unwrap_or_default())
}

fn canonical_law_for(
    ft: &tbasis::bialgebra::FTCoalgebra,
    outputs: &Outputs,
    opts: &Opts,
) -> Result<Arc<tbasis::bialgebra::DistributiveLaw>, Error> {
    let shape = tbasis::bialgebra::MooreShape {
        alphabet: ft.alphabet.clone(),
        outputs: outputs.clone(),
    };
    Ok(Arc::new(tbasis::bialgebra::canonical_law(&ft.monad, shape, opts)?))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckMonad { .. } => "check-monad",
        Command::CheckAlgebra { .. } => "check-algebra",
        Command::CheckBasis { .. } => "check-basis",
        Command::SearchBasis { .. } => "search-basis",
        Command::FindGenerator { .. } => "find-generator",
        Command::Represent { .. } => "represent",
        Command::ChangeBasis { .. } => "change-basis",
        Command::Determinize { .. } => "determinize",
        Command::FreeBialgebra { .. } => "free-bialgebra",
        Command::CanonicalRfsa { .. } => "canonical-rfsa",
        Command::Equiv { .. } => "equiv",
        Command::RenderMatrix { .. } => "render-matrix",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command).to_string();
    let g = &cli.global;
    let result = parse_mode(&g.mode, g.seed).and_then(|mode| {
        let opts = Opts::default().with_mode(mode).with_max_enum(g.max_enum).with_max_den(g.max_den);
        run(&cli.command, &opts)
    });
    let (report, code) = match result {
        Ok(o) => {
            let ok = o.report.ok();
            (
                CommandReport {
                    command: name,
                    status: if ok { "ok" } else { "failed" },
                    certificates: o.report.certificates,
                    artifacts: o.artifacts,
                    result: o.result,
                    error: None,
                    lines: o.lines,
                },
                if ok { 0 } else { 1 },
            )
        }
        Err(e) => {
            let code = exit_code(&e);
            (
                CommandReport {
                    command: name,
                    status: "failed",
                    certificates: Vec::new(),
                    artifacts: Vec::new(),
                    result: Value::Null,
                    error: Some(ErrorReport {
                        code,
                        message: e.to_string(),
                    }),
                    lines: Vec::new(),
                },
                code,
            )
        }
    };
    if g.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
    } else {
        println!("command: {}", report.command);
        println!("status: {}", report.status);
        for l in &report.lines {
            println!("{l}");
        }
        let r = Report {
            certificates: report.certificates,
        };
        if !r.certificates.is_empty() {
            print!("{r}");
        }
        for a in &report.artifacts {
            println!("wrote {a}");
        }
        if let Some(e) = &report.error {
            println!("error: {}", e.message);
        }
    }
    ExitCode::from(code)
}
