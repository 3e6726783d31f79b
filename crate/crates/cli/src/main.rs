//! `fphom`: tables and checks for finitely presented functors on module
//! categories of small finite-dimensional algebras.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use fphom_core::algebra::validate_algebra;
use fphom_core::correspond::{
    classify, dual_presentation_left, dual_presentation_right, dual_serre_ideals, elementary_dual_table,
    exactness_divisibility, fun_exactness_probe, is_fp_hom_closed, is_serre_tensor_ideal, is_tensor_ideal_definable,
    serre_generators, serre_label, ses_battery, ziegler, Context, DefinableClass, DivisibilityOutcome,
    SequenceOutcome, ZieglerFlavor,
};
use fphom_core::funcat::{day_tensor, evaluate, FunctorFile};
use fphom_core::modcat::{
    auto_registry, certify_indecomposable, decompose, hom_space, set_search_seed, IndecRegistry, RegistryFile,
};
use fphom_core::monoidal::{verify_rigidity, TensorKind, TensorStructure};
use fphom_core::presets::{load_algebra, preset};
use fphom_core::suites;
use fphom_core::Error;

use render::{render, yes_no, Format, Table};

/// Cap on candidate tuples and pairwise checks in bounded searches.
const WORK_BUDGET: u64 = 50_000_000;

#[derive(Parser)]
#[command(name = "fphom", version)]
#[command(about = "Finitely presented functors, Day convolution and definable classes over small algebras")]
struct Cli {
    /// Preset (example-5.1, example-5.2), family (truncated:p:n, group:p:n, product:p:n) or JSON file
    #[arg(long, global = true, default_value = "example-5.1")]
    algebra: String,

    /// Module registry: JSON file, or auto:N to enumerate indecomposables up to dimension N
    #[arg(long, global = true)]
    registry: Option<String>,

    /// Functor registry JSON file (default: the preset's functors, else discovery)
    #[arg(long, global = true)]
    functors: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    structure: Option<Structure>,

    #[arg(long, global = true, value_enum, default_value = "md")]
    format: Format,

    /// Seed for randomized splitting searches
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Dimension bound for functor discovery and exactness probes
    #[arg(long, global = true, default_value_t = 4)]
    budget: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Structure {
    Commutative,
    Hopf,
}

impl From<Structure> for TensorKind {
    fn from(s: Structure) -> Self {
        match s {
            Structure::Commutative => TensorKind::Commutative,
            Structure::Hopf => TensorKind::Hopf,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Flavor {
    Full,
    FpHom,
}

#[derive(Subcommand)]
enum Command {
    /// Check algebra axioms, registry modules and rigidity
    Validate,
    /// List the registry indecomposables
    Indecs,
    /// Day tensor products of registry functors
    TensorTable,
    /// Internal homs, tensor products and Hom dimensions of registry modules
    HomTable,
    /// Discover indecomposable functors up to the dimension budget
    Functors,
    /// Classify every support subset
    Classify,
    /// Closed sets of a Ziegler topology
    Ziegler {
        #[arg(long, value_enum, default_value = "fp-hom")]
        flavor: Flavor,
    },
    /// Run both exactness probes on every support subset
    Exactness {
        /// Largest number of registry functors summed in the sequence battery
        #[arg(long, default_value_t = 2)]
        multiplicity: usize,
    },
    /// Elementary duality and dual presentations
    Duality,
    /// Run the property suites
    Verify,
}

/// Rendered tables plus whether every check passed. `raw` replaces the
/// tables when a command has its own JSON shape.
struct Report {
    tables: Vec<Table>,
    raw: Option<String>,
    ok: bool,
}

impl Report {
    fn ok(tables: Vec<Table>) -> Self {
        Self { tables, raw: None, ok: true }
    }

    fn checked(tables: Vec<Table>, ok: bool) -> Self {
        Self { tables, raw: None, ok }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match &report.raw {
                Some(raw) => println!("{raw}"),
                None => print!("{}", render(&report.tables, cli.format)),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::NotRigid(_) => 1,
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> fphom_core::Result<Report> {
    set_search_seed(cli.seed);
    let ctx = load(cli)?;
    match &cli.command {
        Command::Validate => cmd_validate(&ctx),
        Command::Indecs => cmd_indecs(&ctx),
        Command::TensorTable => cmd_tensor_table(&ctx),
        Command::HomTable => cmd_hom_table(&ctx),
        Command::Functors => cmd_functors(&ctx, cli.budget),
        Command::Classify => cmd_classify(&ctx, cli),
        Command::Ziegler { flavor } => cmd_ziegler(&ctx, *flavor),
        Command::Exactness { multiplicity } => cmd_exactness(&ctx, cli.budget, *multiplicity),
        Command::Duality => cmd_duality(&ctx, cli.seed),
        Command::Verify => cmd_verify(&ctx, cli.seed),
    }
}

fn load(cli: &Cli) -> fphom_core::Result<Context> {
    let pre = preset(&cli.algebra)?;
    let algebra = match &pre {
        Some(p) => p.algebra.clone(),
        None => Arc::new(load_algebra(&cli.algebra)?),
    };
    let report = validate_algebra(&algebra);
    if !report.is_valid() {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Validation(format!("algebra axioms: {}", msgs.join("; "))));
    }
    let registry = match (cli.registry.as_deref(), &pre) {
        (Some(spec), _) => load_registry(&algebra, spec)?,
        (None, Some(p)) => p.registry.clone(),
        (None, None) => auto_registry(&algebra, 3, WORK_BUDGET)?,
    };
    let kind: TensorKind = match (cli.structure, &pre) {
        (Some(s), _) => s.into(),
        (None, Some(p)) => p.structure,
        (None, None) if algebra.is_commutative() => TensorKind::Commutative,
        (None, None) => TensorKind::Hopf,
    };
    let tensor = TensorStructure::new(kind, algebra)?;
    if let Some(path) = &cli.functors {
        let text = std::fs::read_to_string(path)?;
        let file: FunctorFile = serde_json::from_str(&text)?;
        let functors = file.into_functors(&registry)?;
        return Context::new(tensor, registry, functors);
    }
    match (&pre, cli.registry.is_none()) {
        (Some(p), true) => Context::new(tensor, registry, p.functors.clone()),
        _ => Context::discover(tensor, registry, cli.budget, WORK_BUDGET),
    }
}

fn load_registry(a: &Arc<fphom_core::algebra::Algebra>, spec: &str) -> fphom_core::Result<IndecRegistry> {
    if let Some(n) = spec.strip_prefix("auto:") {
        let n = n.parse().map_err(|_| Error::Usage(format!("bad registry bound in {spec:?}")))?;
        return auto_registry(a, n, WORK_BUDGET);
    }
    let text = std::fs::read_to_string(spec)?;
    let file: RegistryFile = serde_json::from_str(&text)?;
    file.into_registry(a)
}

fn functor_names(ctx: &Context) -> Vec<String> {
    ctx.functors.names().to_vec()
}

fn module_names(ctx: &Context) -> Vec<String> {
    ctx.registry().names().to_vec()
}

fn cmd_validate(ctx: &Context) -> fphom_core::Result<Report> {
    let a = ctx.registry().algebra();
    let mut alg = Table::new("Algebra", vec!["p".into(), "dim".into(), "commutative".into(), "hopf".into()]);
    alg.push(vec![a.p().to_string(), a.dim().to_string(), yes_no(a.is_commutative()), yes_no(a.hopf().is_some())]);
    let mut ok = true;
    let mut reg = Table::new("Registry", vec!["module".into(), "dim".into(), "axioms".into(), "indecomposable".into()]);
    for (name, m) in module_names(ctx).iter().zip(ctx.registry().items()) {
        let axioms = m.check_axioms().is_ok();
        let indec = certify_indecomposable(m)?;
        ok &= axioms && indec;
        reg.push(vec![name.clone(), m.dim().to_string(), yes_no(axioms), yes_no(indec)]);
    }
    let rig = verify_rigidity(&ctx.tensor, ctx.registry())?;
    let mut rt = Table::new(
        format!("Rigidity ({})", ctx.tensor.kind()),
        vec!["object".into(), "with".into(), "reason".into()],
    );
    for f in &rig.failures {
        rt.push(vec![f.object.clone(), f.other.clone(), f.reason.clone()]);
    }
    if rig.is_rigid() {
        rt.push(vec!["all".into(), "all".into(), "rigid".into()]);
    }
    Ok(Report::checked(vec![alg, reg, rt], ok))
}

fn cmd_indecs(ctx: &Context) -> fphom_core::Result<Report> {
    let mut t = Table::new("Indecomposables", vec!["module".into(), "dim".into(), "dim End".into()]);
    for (name, m) in module_names(ctx).iter().zip(ctx.registry().items()) {
        t.push(vec![name.clone(), m.dim().to_string(), hom_space(m, m)?.dim().to_string()]);
    }
    Ok(Report::ok(vec![t]))
}

fn cmd_tensor_table(ctx: &Context) -> fphom_core::Result<Report> {
    let names = functor_names(ctx);
    let mut cols = vec!["⊗".to_string()];
    cols.extend(names.iter().cloned());
    let mut t = Table::new(format!("Day tensor ({})", ctx.tensor.kind()), cols);
    let fs = ctx.functors.functors();
    for (i, f) in fs.iter().enumerate() {
        let mut row = vec![names[i].clone()];
        for g in fs {
            row.push(ctx.functor_label(&ctx.decompose_functor(&day_tensor(f, g, &ctx.tensor)?)?));
        }
        t.push(row);
    }
    Ok(Report::ok(vec![t]))
}

fn cmd_hom_table(ctx: &Context) -> fphom_core::Result<Report> {
    let reg = ctx.registry();
    let names = module_names(ctx);
    let header = |corner: &str| {
        let mut c = vec![corner.to_string()];
        c.extend(names.iter().cloned());
        c
    };
    let mut ihom = Table::new(format!("hom(X, Y) ({})", ctx.tensor.kind()), header("X \\ Y"));
    let mut tens = Table::new(format!("X ⊗ Y ({})", ctx.tensor.kind()), header("X \\ Y"));
    let mut dims = Table::new("dim Hom(X, Y)", header("X \\ Y"));
    for (i, x) in reg.items().iter().enumerate() {
        let mut a = vec![names[i].clone()];
        let mut b = vec![names[i].clone()];
        let mut c = vec![names[i].clone()];
        for y in reg.items() {
            a.push(ctx.module_label(&decompose(&ctx.tensor.internal_hom(x, y)?.module, reg)?));
            b.push(ctx.module_label(&decompose(&ctx.tensor.tensor_obj(x, y)?, reg)?));
            c.push(hom_space(x, y)?.dim().to_string());
        }
        ihom.push(a);
        tens.push(b);
        dims.push(c);
    }
    Ok(Report::ok(vec![ihom, tens, dims]))
}

fn cmd_functors(ctx: &Context, bound: usize) -> fphom_core::Result<Report> {
    let reg = ctx.registry();
    let found = ctx.auslander.discover_indec_functors(bound, WORK_BUDGET)?;
    let mut cols = vec!["functor".to_string()];
    cols.extend(module_names(ctx).iter().map(|n| format!("dim F({n})")));
    cols.extend(["pdim".to_string(), "presentation".to_string()]);
    let mut t = Table::new(format!("Indecomposable functors (dim bound {bound})"), cols);
    let mut unnamed = 0;
    for f in &found {
        let name = match ctx.functors.match_gamma(&ctx.auslander.to_gamma(f)?)? {
            Some(k) => ctx.functors.name(k).to_string(),
            None => {
                unnamed += 1;
                format!("F{unnamed}")
            }
        };
        let mut row = vec![name];
        for m in reg.items() {
            row.push(evaluate(f, m)?.dim().to_string());
        }
        row.push(ctx.auslander.pdim(f)?.to_string());
        let src = ctx.module_label(&decompose(f.source(), reg)?);
        let tgt = ctx.module_label(&decompose(f.target(), reg)?);
        row.push(format!("{src} -> {tgt}"));
        t.push(row);
    }
    Ok(Report::ok(vec![t]))
}

fn cmd_classify(ctx: &Context, cli: &Cli) -> fphom_core::Result<Report> {
    let records = classify(ctx, cli.budget, WORK_BUDGET)?;
    if cli.format == Format::Json {
        let raw = serde_json::to_string_pretty(&records)?;
        return Ok(Report { tables: Vec::new(), raw: Some(raw), ok: true });
    }
    let cols = [
        "Definable",
        "Monoidal",
        "fp-hom-closed",
        "Tensor-ideal",
        "Serre",
        "Serre monoidal",
        "Serre tensor-ideal",
        "Exactness",
    ];
    let mut t = Table::new(
        format!("Classification ({})", ctx.tensor.kind()),
        cols.iter().map(|s| s.to_string()).collect(),
    );
    for r in &records {
        t.push(vec![
            r.label.clone(),
            yes_no(r.monoidal),
            yes_no(r.fp_hom_closed),
            yes_no(r.tensor_ideal),
            r.serre_label.clone(),
            yes_no(r.serre_monoidal),
            yes_no(r.serre_tensor_ideal),
            r.exactness.clone(),
        ]);
    }
    Ok(Report::ok(vec![t]))
}

fn set_label(names: &[String], set: &[usize]) -> String {
    if set.is_empty() {
        "∅".into()
    } else {
        format!("{{{}}}", set.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(","))
    }
}

fn cmd_ziegler(ctx: &Context, flavor: Flavor) -> fphom_core::Result<Report> {
    let (fl, label) = match flavor {
        Flavor::Full => (ZieglerFlavor::Full, "full"),
        Flavor::FpHom => (ZieglerFlavor::FpHom, "fp-hom"),
    };
    let top = ziegler(ctx, fl)?;
    let n = top.points.len();
    let mut t = Table::new(
        format!("Ziegler closed sets ({label}, {})", ctx.tensor.kind()),
        vec!["closed".into(), "open complement".into()],
    );
    for s in &top.closed_sets {
        let comp: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        t.push(vec![set_label(&top.points, s), set_label(&top.points, &comp)]);
    }
    Ok(Report::ok(vec![t]))
}

fn cmd_exactness(ctx: &Context, bound: usize, multiplicity: usize) -> fphom_core::Result<Report> {
    let reg = ctx.registry();
    let battery = ses_battery(ctx, multiplicity, WORK_BUDGET)?;
    let mut t = Table::new(
        format!("Exactness probes ({}, dim bound {bound}, {} sequences)", ctx.tensor.kind(), battery.len()),
        vec!["support".into(), "divisibility".into(), "sequences".into(), "agree".into(), "witness".into()],
    );
    let mut ok = true;
    for d in DefinableClass::all_subsets(reg.len()) {
        let div = exactness_divisibility(ctx, &d, bound, WORK_BUDGET)?;
        let seq = fun_exactness_probe(ctx, &d, &battery)?;
        let agree = div.passed() == seq.passed();
        ok &= agree;
        let mut witness = Vec::new();
        if let DivisibilityOutcome::Fail { witness: w } = &div {
            witness.push(format!(
                "f: {} -> {}, g: {} -> {}, X = {}",
                w.f.source, w.f.target, w.g.source, w.g.target, w.x
            ));
        }
        if let SequenceOutcome::Fail { witness: w } = &seq {
            witness.push(format!("{} ⊗ [{}] at {}", w.tensor_with, w.sequence, w.at));
        }
        t.push(vec![
            d.label(reg),
            div.summary(),
            if seq.passed() { "pass".into() } else { "fail".into() },
            yes_no(agree),
            witness.join("; "),
        ]);
    }
    Ok(Report::checked(vec![t], ok))
}

fn cmd_duality(ctx: &Context, seed: u64) -> fphom_core::Result<Report> {
    let names = functor_names(ctx);
    let mut tables = Vec::new();
    let mut ok = true;
    match ctx.tensor.kind() {
        TensorKind::Commutative => {
            let table = elementary_dual_table(ctx)?;
            let mut t = Table::new("Elementary dual", vec!["F".into(), "δF".into(), "δδF ≅ F".into()]);
            for (i, f) in ctx.functors.functors().iter().enumerate() {
                let d = ctx.auslander.elementary_dual(f, &ctx.tensor)?;
                let dd = ctx.auslander.elementary_dual(&d, &ctx.tensor)?;
                let inv = ctx.auslander.functor_iso(&dd, f)?;
                ok &= inv;
                t.push(vec![names[i].clone(), ctx.functor_label(&table[i]), yes_no(inv)]);
            }
            tables.push(t);
            let mut s = Table::new(
                "Serre ideals under δ",
                vec!["ideal".into(), "image".into(), "image is an ideal".into(), "tensor-ideal preserved".into()],
            );
            for d in dual_serre_ideals(ctx)? {
                let kept = is_serre_tensor_ideal(ctx, &d.ideal)?.holds == is_serre_tensor_ideal(ctx, &d.image)?.holds;
                ok &= d.image_is_ideal && kept;
                s.push(vec![
                    serre_label(ctx, &d.ideal),
                    serre_label(ctx, &d.image),
                    yes_no(d.image_is_ideal),
                    yes_no(kept),
                ]);
            }
            tables.push(s);
        }
        TensorKind::Hopf => {
            let mut t = Table::new(
                "Dual presentations",
                vec!["F".into(), "F^d presented by".into(), "F^dd ≅ F".into()],
            );
            let reg = ctx.registry();
            for (i, f) in ctx.functors.functors().iter().enumerate() {
                let d = dual_presentation_left(&ctx.tensor, f)?;
                let dd = dual_presentation_right(&ctx.tensor, &d)?;
                let back = ctx.auslander.functor_iso(&dd, f)?;
                ok &= back;
                let m = d.presentation();
                let pres = format!(
                    "{} -> {}",
                    ctx.module_label(&decompose(m.source(), reg)?),
                    ctx.module_label(&decompose(m.target(), reg)?)
                );
                t.push(vec![names[i].clone(), pres, yes_no(back)]);
            }
            tables.push(t);
            let lemma = suites::right_module_tensor_identity(ctx, seed, 50)?;
            ok &= lemma.passed();
            let mut l = Table::new("Right-module tensor identity", vec!["triples".into(), "failures".into()]);
            l.push(vec![lemma.checks.to_string(), lemma.failures.len().to_string()]);
            tables.push(l);
        }
    }
    Ok(Report::checked(tables, ok))
}

fn cmd_verify(ctx: &Context, seed: u64) -> fphom_core::Result<Report> {
    let mut reports = suites::run_all(ctx, seed)?;
    reports.push(correspondence_checks(ctx)?);
    let mut t = Table::new(
        format!("Property suites ({})", ctx.tensor.kind()),
        vec!["suite".into(), "checks".into(), "failures".into()],
    );
    let mut fails = Table::new("Failures", vec!["suite".into(), "detail".into()]);
    for r in &reports {
        t.push(vec![r.name.clone(), r.checks.to_string(), r.failures.len().to_string()]);
        for f in &r.failures {
            fails.push(vec![r.name.clone(), f.clone()]);
        }
    }
    let ok = fails.rows.is_empty();
    let mut tables = vec![t];
    if !ok {
        tables.push(fails);
    }
    Ok(Report::checked(tables, ok))
}

/// Agreement of the independent closure tests on every support subset.
fn correspondence_checks(ctx: &Context) -> fphom_core::Result<suites::SuiteReport> {
    let mut rep = suites::SuiteReport { name: "closure equivalences".into(), checks: 0, failures: Vec::new() };
    let reg = ctx.registry();
    let (mut closed, mut ideals) = (0, 0);
    for d in DefinableClass::all_subsets(reg.len()) {
        let hom_closed = is_fp_hom_closed(ctx, &d)?.holds;
        let gens = serre_generators(ctx, &d)?;
        let ideal = is_serre_tensor_ideal(ctx, &gens)?.holds;
        closed += hom_closed as usize;
        ideals += ideal as usize;
        rep.checks += 1;
        if hom_closed != ideal {
            rep.failures.push(format!("{}: fp-hom-closed {hom_closed}, Serre tensor-ideal {ideal}", d.label(reg)));
        }
        if ctx.tensor.kind() == TensorKind::Hopf {
            let tensor_ideal = is_tensor_ideal_definable(ctx, &d)?.holds;
            rep.checks += 1;
            if hom_closed != tensor_ideal {
                rep.failures.push(format!("{}: fp-hom-closed {hom_closed}, tensor-ideal {tensor_ideal}", d.label(reg)));
            }
        }
    }
    let closed_sets = ziegler(ctx, ZieglerFlavor::FpHom)?.closed_sets.len();
    rep.checks += 1;
    if closed != ideals || closed != closed_sets {
        rep.failures.push(format!("counts differ: {closed} closed classes, {ideals} ideals, {closed_sets} closed sets"));
    }
    Ok(rep)
}
