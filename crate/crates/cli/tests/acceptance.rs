//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines always reach the console.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use fphom_core::correspond::*;
use fphom_core::funcat::day_tensor_nat;
use fphom_core::monoidal::{TensorKind, TensorStructure};
use fphom_core::presets::{preset, PRESET_NAMES};
use fphom_core::suites::run_all;

type Check = Result<String, String>;

const WORK: u64 = 50_000_000;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn context(name: &str) -> Result<Context, String> {
    let pr = preset(name).map_err(err)?.ok_or("unknown preset")?;
    let t = TensorStructure::new(pr.structure, pr.algebra.clone()).map_err(err)?;
    Context::new(t, pr.registry, pr.functors).map_err(err)
}

fn fphom(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fphom")).args(args).output().map_err(err)?;
    ensure!(out.status.success(), "{args:?} exited with {:?}", out.status.code());
    String::from_utf8(out.stdout).map_err(err)
}

fn golden(name: &str) -> Result<String, String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden").join(name);
    std::fs::read_to_string(path).map_err(err)
}

fn md_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| l.starts_with('|') && !l.starts_with("|---"))
        .map(|l| l.trim_matches('|').split(" | ").map(|c| c.trim().to_string()).collect())
        .collect()
}

fn tensor_table(preset: &str, structure: &str, golden_file: &str, expected: [[&str; 5]; 5]) -> Check {
    let out = fphom(&["tensor-table", "--algebra", preset, "--structure", structure])?;
    ensure!(out == golden(golden_file)?, "output differs from {golden_file}");
    let rows = md_rows(&out);
    let names = ["S", "T", "(U,-)", "W", "(R,-)"];
    ensure!(rows[0][1..] == names, "header {:?}", rows[0]);
    let mut cells = 0;
    for (i, want) in expected.iter().enumerate() {
        ensure!(rows[i + 1][0] == names[i], "row label {:?}", rows[i + 1][0]);
        for (j, w) in want.iter().enumerate() {
            ensure!(rows[i + 1][j + 1] == *w, "{}⊗{} = {} (want {w})", names[i], names[j], rows[i + 1][j + 1]);
            cells += 1;
        }
    }
    Ok(format!("{cells}/25 cells, golden identical"))
}

fn criterion_1() -> Check {
    tensor_table(
        "example-5.1",
        "commutative",
        "tensor-table-example-5.1.md",
        [
            ["S", "0", "0", "S", "S"],
            ["0", "(U,-)", "(U,-)", "T", "T"],
            ["0", "(U,-)", "(U,-)", "(U,-)", "(U,-)"],
            ["S", "T", "(U,-)", "W", "W"],
            ["S", "T", "(U,-)", "W", "(R,-)"],
        ],
    )
}

fn criterion_2() -> Check {
    tensor_table(
        "example-5.2",
        "hopf",
        "tensor-table-example-5.2.md",
        [
            ["W", "0", "S", "W", "(R,-)"],
            ["0", "T", "T", "0", "0"],
            ["S", "T", "(U,-)", "W", "(R,-)"],
            ["W", "0", "W", "W", "(R,-)"],
            ["(R,-)", "0", "(R,-)", "(R,-)", "(R,-)^2"],
        ],
    )
}

fn criterion_3() -> Check {
    let out = fphom(&["functors", "--algebra", "example-5.1", "--budget", "4"])?;
    let rows = md_rows(&out);
    ensure!(rows[0][..3] == ["functor", "dim F(U)", "dim F(R)"], "header {:?}", rows[0]);
    let mut got: Vec<(String, String, String)> =
        rows[1..].iter().map(|r| (r[0].clone(), r[1].clone(), r[2].clone())).collect();
    got.sort();
    let mut want: Vec<(String, String, String)> =
        [("S", "0", "1"), ("T", "1", "0"), ("(U,-)", "1", "1"), ("W", "1", "1"), ("(R,-)", "1", "2")]
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect();
    want.sort();
    ensure!(got == want, "discovered {got:?}");
    Ok("5 indecomposable functors with matching evaluations".into())
}

fn criterion_4() -> Check {
    let yn = |b: bool| if b { "Yes" } else { "No" };
    // (label, monoidal, fp-hom-closed, tensor-ideal, serre generators, serre monoidal, serre tensor-ideal)
    type Row<'a> = (&'a str, bool, Option<bool>, bool, &'a [&'a str], bool, bool);
    let commutative: [Row; 4] = [
        ("0", true, Some(true), true, &["S", "T", "(U,-)", "W", "(R,-)"], true, true),
        ("<U>", true, Some(true), true, &["S"], true, true),
        ("<R>", true, Some(false), false, &["T"], false, false),
        ("all", true, Some(true), true, &[], true, true),
    ];
    let hopf: [Row; 4] = [
        ("0", true, None, true, &["S", "T", "(U,-)", "W", "(R,-)"], true, true),
        ("<U>", true, None, false, &["S"], false, false),
        ("<R>", true, None, true, &["T"], true, true),
        ("all", true, None, true, &[], true, true),
    ];
    let mut cells = 0;
    for (name, table) in [("example-5.1", commutative), ("example-5.2", hopf)] {
        let out = fphom(&["classify", "--algebra", name, "--format", "json"])?;
        let recs: Vec<serde_json::Value> = serde_json::from_str(&out).map_err(err)?;
        ensure!(recs.len() == 4, "{name}: {} records", recs.len());
        for (r, (label, mono, fp, ti, gens, smono, sti)) in recs.iter().zip(table) {
            let b = |k: &str| r[k].as_bool().unwrap_or(false);
            ensure!(r["label"] == label, "{name}: label {}", r["label"]);
            ensure!(b("monoidal") == mono, "{name} {label}: monoidal {}", yn(b("monoidal")));
            if let Some(fp) = fp {
                ensure!(b("fp_hom_closed") == fp, "{name} {label}: fp-hom-closed {}", yn(b("fp_hom_closed")));
                cells += 1;
            }
            ensure!(b("tensor_ideal") == ti, "{name} {label}: tensor-ideal {}", yn(b("tensor_ideal")));
            let g: Vec<&str> = r["serre_generators"].as_array().ok_or("generators")?.iter().filter_map(|v| v.as_str()).collect();
            ensure!(g == gens, "{name} {label}: serre generators {g:?}");
            ensure!(b("serre_monoidal") == smono, "{name} {label}: serre monoidal {}", yn(b("serre_monoidal")));
            ensure!(b("serre_tensor_ideal") == sti, "{name} {label}: serre tensor-ideal {}", yn(b("serre_tensor_ideal")));
            cells += 5;
        }
    }
    Ok(format!("{cells} cells across both tables"))
}

fn criterion_5() -> Check {
    let mut agree = 0;
    let mut total = 0;
    for name in PRESET_NAMES {
        let ctx = context(name)?;
        for d in DefinableClass::all_subsets(ctx.registry().len()) {
            let gens = serre_generators(&ctx, &d).map_err(err)?;
            let a = is_fp_hom_closed(&ctx, &d).map_err(err)?.holds;
            let b = is_serre_tensor_ideal(&ctx, &gens).map_err(err)?.holds;
            total += 1;
            agree += (a == b) as usize;
        }
    }
    ensure!(total == 8 && agree == 8, "{agree}/{total} agreements");
    Ok(format!("{agree}/{total} agreements"))
}

fn criterion_6() -> Check {
    let ctx = context("example-5.2")?;
    ensure!(ctx.tensor.kind() == TensorKind::Hopf, "example-5.2 is not hopf");
    let mut n = 0;
    for d in DefinableClass::all_subsets(ctx.registry().len()) {
        let a = is_fp_hom_closed(&ctx, &d).map_err(err)?.holds;
        let b = is_tensor_ideal_definable(&ctx, &d).map_err(err)?.holds;
        ensure!(a == b, "{} disagrees", d.label(ctx.registry()));
        n += 1;
    }
    Ok(format!("{n}/4 subsets agree"))
}

fn sets(t: &ZieglerTopology) -> Vec<Vec<String>> {
    let mut s: Vec<Vec<String>> = t
        .closed_set_names()
        .into_iter()
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
    s.sort();
    s
}

fn criterion_7() -> Check {
    let ex1 = context("example-5.1")?;
    let ex2 = context("example-5.2")?;
    let full = ziegler(&ex1, ZieglerFlavor::Full).map_err(err)?;
    ensure!(full.closed_sets.len() == 4, "full has {} closed sets", full.closed_sets.len());
    let s = |v: &[&[&str]]| -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = v.iter().map(|x| x.iter().map(|y| y.to_string()).collect()).collect();
        out.sort();
        out
    };
    let h1 = ziegler(&ex1, ZieglerFlavor::FpHom).map_err(err)?;
    ensure!(sets(&h1) == s(&[&[], &["U"], &["R", "U"]]), "fp-hom closed sets {:?}", sets(&h1));
    let h2 = ziegler(&ex2, ZieglerFlavor::FpHom).map_err(err)?;
    ensure!(sets(&h2) == s(&[&[], &["R"], &["R", "U"]]), "fp-hom closed sets {:?}", sets(&h2));
    Ok("4 / 3 / 3 closed sets, axioms verified".into())
}

fn criterion_8() -> Check {
    let ctx = context("example-5.1")?;
    let pd = |n: &str| ctx.auslander.pdim(ctx.functors.functor(ctx.functors.index_of(n).unwrap())).map_err(err);
    ensure!(pd("S")? == 1, "pdim S = {}", pd("S")?);
    ensure!(pd("T")? == 2, "pdim T = {}", pd("T")?);
    let records = pdim_closure(&ctx).map_err(err)?;
    let low: Vec<&PdimClosure> = records.iter().filter(|r| r.pdim <= 1).collect();
    for r in &low {
        ensure!(r.closed, "{} in {} is pdim {} but not closed", r.member, r.ideal, r.pdim);
    }
    let t = records.iter().find(|r| r.member == "T" && r.ideal == "<T>").ok_or("no <T> record")?;
    ensure!(!t.closed, "T is closed");
    let w = t.witness.as_ref().ok_or("no witness for T")?;
    ensure!(w.with == "T" && w.summand == "(U,-)", "witness {w:?}");
    Ok(format!("pdim S=1, T=2; {} pdim<=1 members closed; T⊗T ∋ (U,-) ∉ <T>", low.len()))
}

fn replay_sequence(ctx: &Context, battery: &[ShortExact], w: &SequenceWitness) -> Result<bool, String> {
    let ses = battery.iter().find(|s| s.label == w.sequence).ok_or("unknown sequence")?;
    let k = ctx.functors.functor(ctx.functors.index_of(&w.tensor_with).ok_or("unknown functor")?);
    let x = ctx.registry().item(ctx.registry().index_of(&w.at).ok_or("unknown module")?);
    let first = day_tensor_nat(k, &ses.first, &ctx.tensor).map_err(err)?;
    let second = day_tensor_nat(k, &ses.second, &ctx.tensor).map_err(err)?;
    let before = is_short_exact(&ses.first.at(x).map_err(err)?, &ses.second.at(x).map_err(err)?);
    Ok(before && !is_short_exact(&first.at(x).map_err(err)?, &second.at(x).map_err(err)?))
}

fn criterion_9() -> Check {
    let ctx = context("example-5.1")?;
    let battery = ses_battery(&ctx, 2, WORK).map_err(err)?;
    let full = DefinableClass::full(ctx.registry().len());
    let DivisibilityOutcome::Fail { witness } = exactness_divisibility(&ctx, &full, 4, WORK).map_err(err)? else {
        return Err("full class passes divisibility".into());
    };
    let (f, g, h) = witness.morphisms.as_ref().ok_or("witness has no morphisms")?;
    ensure!(replay_divisibility_witness(&ctx.tensor, f, g, h).map_err(err)?, "divisibility witness does not replay");
    let SequenceOutcome::Fail { witness: sw } = fun_exactness_probe(&ctx, &full, &battery).map_err(err)? else {
        return Err("full class passes the sequence probe".into());
    };
    ensure!(replay_sequence(&ctx, &battery, &sw)?, "sequence witness does not replay");

    let u = DefinableClass::new([ctx.registry().index_of("U").ok_or("no U")?]);
    ensure!(exactness_divisibility(&ctx, &u, 4, WORK).map_err(err)?.passed(), "<U> fails divisibility");
    ensure!(fun_exactness_probe(&ctx, &u, &battery).map_err(err)?.passed(), "<U> fails the sequence probe");

    let mut compared = 0;
    for d in DefinableClass::all_subsets(ctx.registry().len()) {
        let a = exactness_divisibility(&ctx, &d, 4, WORK).map_err(err)?.passed();
        let b = fun_exactness_probe(&ctx, &d, &battery).map_err(err)?.passed();
        ensure!(a == b, "probes disagree on {}", d.label(ctx.registry()));
        compared += 1;
    }

    let a = std::sync::Arc::new(fphom_core::algebra::build_product_algebra(2, 2).map_err(err)?);
    let reg = fphom_core::modcat::auto_registry(&a, 2, WORK).map_err(err)?;
    let t = TensorStructure::new(TensorKind::Commutative, a).map_err(err)?;
    let ff = Context::discover(t, reg, 2, WORK).map_err(err)?;
    let ff_battery = ses_battery(&ff, 2, WORK).map_err(err)?;
    let mut ff_subsets = 0;
    for d in DefinableClass::all_subsets(ff.registry().len()) {
        let a = exactness_divisibility(&ff, &d, 4, WORK).map_err(err)?.passed();
        let b = fun_exactness_probe(&ff, &d, &ff_battery).map_err(err)?.passed();
        ensure!(a && b, "F2xF2 subset {} fails", d.label(ff.registry()));
        ff_subsets += 1;
    }
    compared += ff_subsets;
    Ok(format!(
        "full class fails both (witnesses replay), <U> passes at dim<=4, {ff_subsets}/{ff_subsets} F2xF2 subsets pass, {compared} subsets probe-consistent"
    ))
}

fn criterion_10() -> Check {
    let ctx = context("example-5.1")?;
    let names = ctx.functors.names();
    for (i, f) in ctx.functors.functors().iter().enumerate() {
        let d = ctx.auslander.elementary_dual(f, &ctx.tensor).map_err(err)?;
        let dd = ctx.auslander.elementary_dual(&d, &ctx.tensor).map_err(err)?;
        ensure!(ctx.auslander.functor_iso(&dd, f).map_err(err)?, "δδ{} is not {}", names[i], names[i]);
    }
    let table = elementary_dual_table(&ctx).map_err(err)?;
    let image = |n: &str| -> String {
        let i = ctx.functors.index_of(n).unwrap();
        ctx.functor_label(&table[i])
    };
    for (from, to) in [("S", "S"), ("T", "T"), ("(R,-)", "(R,-)"), ("(U,-)", "W"), ("W", "(U,-)")] {
        ensure!(image(from) == to, "δ{from} = {} (want {to})", image(from));
    }
    let duals = dual_serre_ideals(&ctx).map_err(err)?;
    let mut images: Vec<Vec<usize>> = duals.iter().map(|d| d.image.clone()).collect();
    let mut ideals: Vec<Vec<usize>> = duals.iter().map(|d| d.ideal.clone()).collect();
    images.sort();
    images.dedup();
    ideals.sort();
    ensure!(images == ideals, "δ is not a bijection on serre ideals");
    for d in &duals {
        let a = is_serre_tensor_ideal(&ctx, &d.ideal).map_err(err)?.holds;
        let b = is_serre_tensor_ideal(&ctx, &d.image).map_err(err)?.holds;
        ensure!(a == b, "tensor-ideal property changes under δ");
    }
    Ok(format!("δδ≅id on {} functors, (U,-)↔W, {} serre ideals permuted", names.len(), duals.len()))
}

fn criterion_11() -> Check {
    let mut checks = 0;
    let mut lemma = 0;
    for name in PRESET_NAMES {
        let ctx = context(name)?;
        for r in run_all(&ctx, 7).map_err(err)? {
            ensure!(r.passed(), "{name} {}: {:?}", r.name, r.failures);
            checks += r.checks;
            if r.name.contains("right-module") {
                lemma += r.checks;
            }
        }
    }
    ensure!(lemma >= 50, "only {lemma} sampled triples");
    Ok(format!("{checks} checks, 0 failures ({lemma} sampled triples)"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 11] = [
        ("tensor table, commutative", criterion_1),
        ("tensor table, hopf", criterion_2),
        ("indecomposable discovery", criterion_3),
        ("classification tables", criterion_4),
        ("fp-hom-closed vs serre tensor-ideal", criterion_5),
        ("rigid equivalence", criterion_6),
        ("ziegler topologies", criterion_7),
        ("pdim closure", criterion_8),
        ("exactness probes", criterion_9),
        ("elementary duality", criterion_10),
        ("property suites", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
