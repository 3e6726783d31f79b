//! Built-in example configurations.
//!
//! Two configurations share the same underlying ring `k[ε]/(ε²)` over `F_2`:
//! the dual numbers with `⊗_R`, and the group algebra `F_2 C_2` (with
//! `g = 1 + ε`) with the Hopf-diagonal `⊗_k`. Both come with their two
//! indecomposables `U` (simple) and `R` (regular) and the five indecomposable
//! finitely presented functors `S`, `T`, `(U,-)`, `W`, `(R,-)`:
//!
//! - `S = F_p` for `p: R -> U`, `S(M) ≅ εM`
//! - `T = F_j` for `j: U -> R`, `T(M) ≅ ann_M(ε) / εM`
//! - `W = F_ε` for `ε: R -> R`, `W(M) ≅ M / εM`

use std::sync::Arc;

use crate::algebra::{
    build_group_algebra, build_product_algebra, build_truncated_poly, parse_algebra_json, Algebra,
};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::funcat::FpFunctor;
use crate::modcat::{IndecRegistry, Module, ModuleMorphism};
use crate::monoidal::TensorKind;

#[derive(Clone, Debug)]
pub struct Preset {
    pub algebra: Arc<Algebra>,
    pub registry: IndecRegistry,
    pub functors: Vec<(String, FpFunctor)>,
    pub structure: TensorKind,
}

pub const PRESET_NAMES: [&str; 2] = ["example-5.1", "example-5.2"];

pub fn preset(name: &str) -> Result<Option<Preset>> {
    match name {
        "example-5.1" => dual_numbers().map(Some),
        "example-5.2" => cyclic_group().map(Some),
        _ => Ok(None),
    }
}

/// `k[ε]/(ε²)` over `F_2` with `⊗_R`.
pub fn dual_numbers() -> Result<Preset> {
    let a = Arc::new(build_truncated_poly(2, 2)?);
    // basis 1, ε
    let eps = vec![0, 1];
    square_zero_example(a, &eps, TensorKind::Commutative)
}

/// `F_2 C_2` with the Hopf-diagonal `⊗_k`.
pub fn cyclic_group() -> Result<Preset> {
    let a = Arc::new(build_group_algebra(2, 2)?);
    // basis 1, g; ε = 1 + g
    let eps = vec![1, 1];
    square_zero_example(a, &eps, TensorKind::Hopf)
}

/// Shared construction for a two-dimensional local algebra over `F_2` with
/// radical generator `eps`.
fn square_zero_example(a: Arc<Algebra>, eps: &[u8], structure: TensorKind) -> Result<Preset> {
    let p = a.p();
    let r = Module::regular(a.clone());
    let eps_r = r.act(eps);
    // U = R / εR: every basis element acts by its augmentation
    let u_action = (0..a.dim())
        .map(|b| Matrix::scalar(p, 1, augmentation(&a, eps, &a.basis_vector(b))))
        .collect();
    let u = Module::new(a.clone(), u_action)?;
    let registry = IndecRegistry::new(a.clone(), vec![("R".into(), r.clone()), ("U".into(), u.clone())], Some(2))?;

    let aug: Vec<u8> = (0..a.dim()).map(|b| augmentation(&a, eps, &a.basis_vector(b))).collect();
    let pmap = ModuleMorphism::new(r.clone(), u.clone(), Matrix::from_data(p, 1, a.dim(), aug))?;
    let jmap = ModuleMorphism::new(u.clone(), r.clone(), Matrix::from_columns(p, a.dim(), &[eps.to_vec()]))?;
    let emap = ModuleMorphism::new(r.clone(), r.clone(), eps_r)?;
    let functors = vec![
        ("S".to_string(), FpFunctor::new(pmap)),
        ("T".to_string(), FpFunctor::new(jmap)),
        ("(U,-)".to_string(), FpFunctor::yoneda(&u)),
        ("W".to_string(), FpFunctor::new(emap)),
        ("(R,-)".to_string(), FpFunctor::yoneda(&r)),
    ];
    Ok(Preset { algebra: a, registry, functors, structure })
}

/// The scalar `x` reduces to modulo the radical spanned by `eps`.
fn augmentation(a: &Algebra, eps: &[u8], x: &[u8]) -> u8 {
    // x = c·1 + d·eps; solve over the 2-dimensional algebra
    let m = Matrix::from_columns(a.p(), a.dim(), &[a.unit().to_vec(), eps.to_vec()]);
    let sol = m.solve(x).ok().flatten().expect("1 and eps span the algebra");
    sol[0]
}

/// Parses an algebra argument: a preset name, a generated family
/// (`truncated:p:n`, `group:p:n`, `product:p:n`), or a JSON file path.
pub fn load_algebra(spec: &str) -> Result<Algebra> {
    if let Some(p) = preset(spec)? {
        return Ok((*p.algebra).clone());
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Usage(format!("bad number in {spec:?}")));
        let p = parse(parts[1])? as u8;
        let n = parse(parts[2])?;
        return match parts[0] {
            "truncated" => build_truncated_poly(p, n),
            "group" => build_group_algebra(p, n),
            "product" => build_product_algebra(p, n),
            other => Err(Error::Usage(format!("unknown algebra family {other:?}"))),
        };
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Usage(format!("cannot read algebra file {spec:?}: {e}")))?;
    parse_algebra_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::{evaluate, Auslander, FunctorRegistry};

    #[test]
    fn both_presets_have_five_indecomposable_functors() {
        for name in PRESET_NAMES {
            let pr = preset(name).unwrap().unwrap();
            let ctx = Auslander::new(pr.registry.clone()).unwrap();
            let freg = FunctorRegistry::new(&ctx, pr.functors.clone()).unwrap();
            assert_eq!(freg.len(), 5);
            let dims: Vec<Vec<usize>> = pr
                .functors
                .iter()
                .map(|(_, f)| pr.registry.items().iter().map(|m| evaluate(f, m).unwrap().dim()).collect())
                .collect();
            assert_eq!(dims, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 1], vec![1, 2]]);
        }
    }

    #[test]
    fn families_parse() {
        assert_eq!(load_algebra("truncated:3:2").unwrap().dim(), 2);
        assert_eq!(load_algebra("product:2:3").unwrap().dim(), 3);
        assert!(load_algebra("group:2:2").unwrap().hopf().is_some());
        assert!(load_algebra("nonsense").is_err());
    }
}
