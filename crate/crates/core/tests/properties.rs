use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use fphom_core::algebra::build_group_algebra;
use fphom_core::exactla::{Matrix, Subspace};
use fphom_core::funcat::{day_tensor, evaluate, FpFunctor};
use fphom_core::modcat::{
    auto_registry, decompose, direct_sum, hom_space, mor_cokernel, mor_kernel, IndecRegistry, Module,
    ModuleMorphism,
};
use fphom_core::monoidal::TensorStructure;
use fphom_core::presets::preset;

fn matrix(p: u8, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(0..p, rows * cols).prop_map(move |d| Matrix::from_data(p, rows, cols, d))
}

fn sized_matrix() -> impl Strategy<Value = Matrix> {
    (prop::sample::select(vec![2u8, 3, 5]), 1usize..6, 1usize..6).prop_flat_map(|(p, r, c)| matrix(p, r, c))
}

fn invertible(p: u8, n: usize) -> impl Strategy<Value = Matrix> {
    matrix(p, n, n).prop_filter("invertible", |m| m.is_invertible())
}

fn group_registry() -> &'static IndecRegistry {
    static REG: OnceLock<IndecRegistry> = OnceLock::new();
    REG.get_or_init(|| {
        let a = Arc::new(build_group_algebra(3, 3).unwrap());
        auto_registry(&a, 3, 1 << 22).unwrap()
    })
}

/// Registry picks together with a basis change for their direct sum.
fn picks_and_change() -> impl Strategy<Value = (Vec<usize>, Matrix)> {
    let reg = group_registry();
    prop::collection::vec(0..reg.len(), 1..4).prop_flat_map(move |picks| {
        let n = picks.iter().map(|&i| reg.item(i).dim()).sum();
        (Just(picks), invertible(3, n))
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity(m in sized_matrix()) {
        prop_assert_eq!(m.rank() + m.nullspace().len(), m.cols());
        for v in m.nullspace() {
            prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rref_is_row_canonical((m, q) in (prop::sample::select(vec![2u8, 3]), 1usize..5, 1usize..5)
        .prop_flat_map(|(p, r, c)| (matrix(p, r, c), invertible(p, r))))
    {
        prop_assert_eq!(q.mul(&m).rref().0, m.rref().0.clone());
        prop_assert_eq!(m.rref().0.rref().0, m.rref().0);
    }

    #[test]
    fn solve_finds_preimages((m, x) in (prop::sample::select(vec![2u8, 5]), 1usize..5, 1usize..5)
        .prop_flat_map(|(p, r, c)| (matrix(p, r, c), prop::collection::vec(0..p, c))))
    {
        let y = m.mul_vec(&x);
        let sol = m.solve(&y).unwrap().expect("consistent");
        prop_assert_eq!(m.mul_vec(&sol), y);
    }

    #[test]
    fn subspace_dimension_formula((a, b) in (1usize..4, 1usize..4, 1usize..6)
        .prop_flat_map(|(r, s, n)| (matrix(3, r, n), matrix(3, s, n))))
    {
        let u = Subspace::from_spanning(3, a.cols(), &a.to_rows());
        let v = Subspace::from_spanning(3, b.cols(), &b.to_rows());
        let sum = u.sum(&v).unwrap();
        let meet = u.intersection(&v).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + v.dim());
        prop_assert!(u.contains(&meet) && v.contains(&meet) && sum.contains(&u));
    }

    #[test]
    fn decomposition_recovers_summands((picks, change) in picks_and_change()) {
        let reg = group_registry();
        let parts: Vec<Module> = picks.iter().map(|&i| reg.item(i).clone()).collect();
        let sum = direct_sum(reg.algebra(), &parts).unwrap().module;
        let (moved, _) = sum.change_basis(&change).unwrap();
        let mut expected: Vec<(usize, usize)> = Vec::new();
        for &i in &picks {
            match expected.iter_mut().find(|(j, _)| *j == i) {
                Some(e) => e.1 += 1,
                None => expected.push((i, 1)),
            }
        }
        expected.sort();
        prop_assert_eq!(decompose(&moved, reg).unwrap(), expected);
    }

    #[test]
    fn kernel_and_cokernel_dimensions(i in 0usize..8, j in 0usize..8, coeffs in prop::collection::vec(0u8..3, 16)) {
        let reg = group_registry();
        let (m, n) = (reg.item(i % reg.len()), reg.item(j % reg.len()));
        let h = hom_space(m, n).unwrap();
        let f = ModuleMorphism::new(m.clone(), n.clone(), h.element(&coeffs[..h.dim()])).unwrap();
        let (k, _) = mor_kernel(&f).unwrap();
        let (q, _) = mor_cokernel(&f).unwrap();
        prop_assert_eq!(k.dim() + f.rank(), m.dim());
        prop_assert_eq!(q.dim() + f.rank(), n.dim());
    }

    #[test]
    fn group_tensor_dimensions_multiply(i in 0usize..8, j in 0usize..8) {
        let reg = group_registry();
        let t = TensorStructure::hopf(reg.algebra().clone()).unwrap();
        let (m, n) = (reg.item(i % reg.len()), reg.item(j % reg.len()));
        prop_assert_eq!(t.tensor_obj(m, n).unwrap().dim(), m.dim() * n.dim());
    }

    #[test]
    fn representable_day_tensor_evaluates_to_homs(a in 0usize..2, u in 0usize..2, x in 0usize..2, hopf in any::<bool>()) {
        let pr = preset(if hopf { "example-5.2" } else { "example-5.1" }).unwrap().unwrap();
        let t = TensorStructure::new(pr.structure, pr.algebra.clone()).unwrap();
        let reg = &pr.registry;
        let (ma, mu, mx) = (reg.item(a), reg.item(u), reg.item(x));
        let d = day_tensor(&FpFunctor::yoneda(ma), &FpFunctor::yoneda(mu), &t).unwrap();
        let expected = hom_space(&t.tensor_obj(ma, mu).unwrap(), mx).unwrap().dim();
        prop_assert_eq!(evaluate(&d, mx).unwrap().dim(), expected);
    }
}
