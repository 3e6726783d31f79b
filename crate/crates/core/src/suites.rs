//! Property suites run against a configured context.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::correspond::{
    dual_presentation_left, dual_presentation_right, lemma_dims, Context, RightFunctor,
};
use crate::error::Result;
use crate::exactla::Matrix;
use crate::funcat::{day_tensor, evaluate, nat_cokernel, nat_hom, FpFunctor};
use crate::modcat::{decompose, direct_sum, hom_space, Module};
use crate::monoidal::TensorKind;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every suite that applies to the context's tensor structure.
pub fn run_all(ctx: &Context, seed: u64) -> Result<Vec<SuiteReport>> {
    let mut out = vec![
        krull_schmidt_shuffles(ctx, seed, 100)?,
        day_monoidal_laws(ctx)?,
        representable_tensor_dims(ctx)?,
        representable_tensor_presentation(ctx)?,
        kernel_cokernel_exactness(ctx)?,
        tensor_hom_adjunction(ctx)?,
        gamma_round_trip(ctx)?,
    ];
    if ctx.tensor.kind() == TensorKind::Hopf {
        out.push(double_dual(ctx)?);
        out.push(right_module_tensor_identity(ctx, seed, 50)?);
    }
    Ok(out)
}

fn random_invertible(rng: &mut ChaCha8Rng, p: u8, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let m = Matrix::from_data(p, n, n, data);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Decomposing a randomly rebased, reshuffled direct sum gives the same multiplicities.
pub fn krull_schmidt_shuffles(ctx: &Context, seed: u64, rounds: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("krull-schmidt determinism");
    let reg = ctx.registry();
    let a = reg.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..rounds {
        let mut picks: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..reg.len())).collect();
        let mut expected: Vec<(usize, usize)> = Vec::new();
        for &i in &picks {
            match expected.iter_mut().find(|(j, _)| *j == i) {
                Some(e) => e.1 += 1,
                None => expected.push((i, 1)),
            }
        }
        expected.sort();
        picks.shuffle(&mut rng);
        let parts: Vec<Module> = picks.iter().map(|&i| reg.item(i).clone()).collect();
        let sum = direct_sum(a, &parts)?.module;
        let change = random_invertible(&mut rng, a.p(), sum.dim());
        let (moved, _) = sum.change_basis(&change)?;
        let got = decompose(&moved, reg)?;
        rep.check(got == expected, || format!("round {round}: {picks:?} decomposed as {got:?}"));
    }
    Ok(rep)
}

/// Unit, symmetry and associativity of the Day tensor on registry functors.
pub fn day_monoidal_laws(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("day unit/symmetry/associativity");
    let t = &ctx.tensor;
    let g = &ctx.auslander;
    let fs = ctx.functors.functors();
    let names = ctx.functors.names();
    let unit = FpFunctor::yoneda(t.unit());
    for (i, f) in fs.iter().enumerate() {
        let ok = g.functor_iso(&day_tensor(&unit, f, t)?, f)?;
        rep.check(ok, || format!("unit law fails for {}", names[i]));
    }
    let products: Vec<Vec<FpFunctor>> =
        fs.iter().map(|f| fs.iter().map(|h| day_tensor(f, h, t)).collect::<Result<_>>()).collect::<Result<_>>()?;
    for i in 0..fs.len() {
        for j in 0..fs.len() {
            let ok = g.functor_iso(&products[i][j], &products[j][i])?;
            rep.check(ok, || format!("{} ⊗ {} is not symmetric", names[i], names[j]));
            for k in 0..fs.len() {
                let left = day_tensor(&products[i][j], &fs[k], t)?;
                let right = day_tensor(&fs[i], &products[j][k], t)?;
                let ok = g.functor_iso(&left, &right)?;
                rep.check(ok, || format!("({0} ⊗ {1}) ⊗ {2} vs {0} ⊗ ({1} ⊗ {2})", names[i], names[j], names[k]));
            }
        }
    }
    Ok(rep)
}

/// `dim ((X,-) ⊗ F)(Z) = dim F(hom(X, Z))`.
pub fn representable_tensor_dims(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("representable tensor evaluation");
    let reg = ctx.registry();
    for (xi, x) in reg.items().iter().enumerate() {
        let yx = FpFunctor::yoneda(x);
        for (fi, f) in ctx.functors.functors().iter().enumerate() {
            let d = day_tensor(&yx, f, &ctx.tensor)?;
            for (zi, z) in reg.items().iter().enumerate() {
                let lhs = evaluate(&d, z)?.dim();
                let rhs = evaluate(f, &ctx.tensor.internal_hom(x, z)?.module)?.dim();
                rep.check(lhs == rhs, || {
                    format!("X={} F={} Z={}: {lhs} vs {rhs}", reg.name(xi), ctx.functors.name(fi), reg.name(zi))
                });
            }
        }
    }
    Ok(rep)
}

/// `(C,-) ⊗ F_f ≅ F_{C ⊗ f}`.
pub fn representable_tensor_presentation(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("representable tensor presentation");
    let reg = ctx.registry();
    for (ci, c) in reg.items().iter().enumerate() {
        for (fi, f) in ctx.functors.functors().iter().enumerate() {
            let lhs = day_tensor(&FpFunctor::yoneda(c), f, &ctx.tensor)?;
            let rhs = FpFunctor::new(ctx.tensor.tensor_obj_mor(c, f.presentation())?);
            let ok = ctx.auslander.functor_iso(&lhs, &rhs)?;
            rep.check(ok, || format!("C={} F={}", reg.name(ci), ctx.functors.name(fi)));
        }
    }
    Ok(rep)
}

/// `0 -> ker α -> F -> G -> coker α -> 0` is exact at every registry item.
pub fn kernel_cokernel_exactness(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("kernel/cokernel pointwise exactness");
    let reg = ctx.registry();
    let fs = ctx.functors.functors();
    for (fi, f) in fs.iter().enumerate() {
        for (gi, g) in fs.iter().enumerate() {
            for (bi, alpha) in nat_hom(f, g)?.iter().enumerate() {
                let (_, incl) = ctx.auslander.nat_kernel(alpha)?;
                let (_, proj) = nat_cokernel(alpha)?;
                for (mi, m) in reg.items().iter().enumerate() {
                    let (k, a, c) = (incl.at(m)?, alpha.at(m)?, proj.at(m)?);
                    let ok = k.rank() == k.cols()
                        && c.rank() == c.rows()
                        && a.mul(&k).is_zero()
                        && c.mul(&a).is_zero()
                        && k.rank() + a.rank() == a.cols()
                        && a.rank() + c.rank() == a.rows();
                    rep.check(ok, || {
                        format!("{} -> {} basis {bi} at {}", ctx.functors.name(fi), ctx.functors.name(gi), reg.name(mi))
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// `dim Hom(A ⊗ U, X) = dim Hom(A, hom(U, X))`.
pub fn tensor_hom_adjunction(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tensor-hom adjunction");
    let reg = ctx.registry();
    let items = reg.items();
    for (ai, a) in items.iter().enumerate() {
        for (ui, u) in items.iter().enumerate() {
            let au = ctx.tensor.tensor_obj(a, u)?;
            for (xi, x) in items.iter().enumerate() {
                let lhs = hom_space(&au, x)?.dim();
                let rhs = hom_space(a, &ctx.tensor.internal_hom(u, x)?.module)?.dim();
                rep.check(lhs == rhs, || {
                    format!("A={} U={} X={}: {lhs} vs {rhs}", reg.name(ai), reg.name(ui), reg.name(xi))
                });
            }
        }
    }
    Ok(rep)
}

/// Functor to `Γ`-module and back gives an isomorphic functor.
pub fn gamma_round_trip(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("gamma round trip");
    for (fi, f) in ctx.functors.functors().iter().enumerate() {
        let back = ctx.auslander.from_gamma(&ctx.auslander.to_gamma(f)?)?.functor;
        let ok = ctx.auslander.functor_iso(&back, f)?;
        rep.check(ok, || format!("{} does not round trip", ctx.functors.name(fi)));
    }
    Ok(rep)
}

/// Dualizing a presentation twice gives an isomorphic functor.
pub fn double_dual(ctx: &Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("double dual");
    for (fi, f) in ctx.functors.functors().iter().enumerate() {
        let back = dual_presentation_right(&ctx.tensor, &dual_presentation_left(&ctx.tensor, f)?)?;
        let ok = ctx.auslander.functor_iso(&back, f)?;
        rep.check(ok, || format!("{} is not its own double dual", ctx.functors.name(fi)));
    }
    Ok(rep)
}

/// `dim (L ⊗ M) ⊗_A N = dim L ⊗_A (M^d ⊗ N)` on sampled triples of right,
/// right and left functors. Right functors are duals of registry functors
/// and representables.
pub fn right_module_tensor_identity(ctx: &Context, seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("right-module tensor identity");
    let mut rights: Vec<(String, RightFunctor)> = Vec::new();
    for (name, f) in ctx.functors.names().iter().zip(ctx.functors.functors()) {
        rights.push((format!("{name}^d"), dual_presentation_left(&ctx.tensor, f)?));
    }
    for (name, m) in ctx.registry().names().iter().zip(ctx.registry().items()) {
        rights.push((format!("(-,{name})"), RightFunctor::representable(m)));
    }
    let lefts = ctx.functors.functors();
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for l in 0..rights.len() {
        for m in 0..rights.len() {
            for n in 0..lefts.len() {
                triples.push((l, m, n));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    triples.shuffle(&mut rng);
    triples.truncate(samples.max(1));
    for (l, m, n) in triples {
        let (lhs, rhs) = lemma_dims(&ctx.tensor, &rights[l].1, &rights[m].1, &lefts[n])?;
        rep.check(lhs == rhs, || {
            format!("L={} M={} N={}: {lhs} vs {rhs}", rights[l].0, rights[m].0, ctx.functors.name(n))
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoidal::TensorStructure;
    use crate::presets::preset;

    #[test]
    fn all_suites_pass_on_presets() {
        for name in crate::presets::PRESET_NAMES {
            let pr = preset(name).unwrap().unwrap();
            let t = TensorStructure::new(pr.structure, pr.algebra.clone()).unwrap();
            let ctx = Context::new(t, pr.registry, pr.functors).unwrap();
            for r in run_all(&ctx, 7).unwrap() {
                assert!(r.passed(), "{name}: {} {:?}", r.name, r.failures);
                assert!(r.checks > 0, "{name}: {}", r.name);
            }
        }
    }
}
