//! Closed symmetric monoidal structures on the module category.
//!
//! Two structures are supported: the tensor product over a commutative
//! algebra `M ⊗_R N`, realized as the quotient of `M ⊗_k N` by the relators
//! `rm ⊗ n - m ⊗ rn`, and the Hopf-diagonal `M ⊗_k N` where the algebra acts
//! through its comultiplication. Underlying vector spaces of `M ⊗_k N` use the
//! Kronecker index `(m, n) -> m * dim N + n`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Quotient, Subspace};
use crate::modcat::{hom_space, is_isomorphic, same_algebra, IndecRegistry, Module, ModuleMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorKind {
    /// `⊗_R` over a commutative algebra, unit `R`.
    Commutative,
    /// `⊗_k` with the diagonal action of a Hopf algebra, unit the trivial module.
    Hopf,
}

impl std::str::FromStr for TensorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commutative" => Ok(Self::Commutative),
            "hopf" => Ok(Self::Hopf),
            other => Err(Error::Usage(format!("unknown tensor structure {other:?}; expected commutative or hopf"))),
        }
    }
}

impl std::fmt::Display for TensorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Commutative => "commutative",
            Self::Hopf => "hopf",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TensorStructure {
    kind: TensorKind,
    algebra: Arc<Algebra>,
    unit: Module,
}

/// `M ⊗ N` together with its relation to the Kronecker space `M ⊗_k N`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: Module,
    /// `M ⊗_k N -> M ⊗ N`.
    pub projection: Matrix,
    /// A linear section `M ⊗ N -> M ⊗_k N` of the projection.
    pub section: Matrix,
}

/// `hom(M, N)` with the linear maps its basis vectors stand for.
#[derive(Clone, Debug)]
pub struct InternalHom {
    pub module: Module,
    /// `basis[i]` is the `dim N × dim M` matrix of the `i`-th basis vector.
    pub basis: Vec<Matrix>,
}

/// A dual object with evaluation `M ⊗ M^∨ -> 1` and coevaluation `1 -> M^∨ ⊗ M`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub module: Module,
    /// Linear maps `M -> 1` represented by the basis of `M^∨`.
    pub functionals: Vec<Matrix>,
    pub eval: ModuleMorphism,
    pub coeval: ModuleMorphism,
}

impl TensorStructure {
    pub fn new(kind: TensorKind, algebra: Arc<Algebra>) -> Result<Self> {
        let p = algebra.p();
        let unit = match kind {
            TensorKind::Commutative => {
                if !algebra.is_commutative() {
                    return Err(Error::Usage("the tensor product over R needs a commutative algebra".into()));
                }
                Module::regular(algebra.clone())
            }
            TensorKind::Hopf => {
                let hopf = algebra
                    .hopf()
                    .ok_or_else(|| Error::Usage("the Hopf-diagonal tensor product needs Hopf data".into()))?;
                let action = hopf.counit.iter().map(|&c| Matrix::scalar(p, 1, c)).collect();
                Module::new(algebra.clone(), action)?
            }
        };
        Ok(Self { kind, algebra, unit })
    }

    pub fn commutative(algebra: Arc<Algebra>) -> Result<Self> {
        Self::new(TensorKind::Commutative, algebra)
    }

    pub fn hopf(algebra: Arc<Algebra>) -> Result<Self> {
        Self::new(TensorKind::Hopf, algebra)
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn unit(&self) -> &Module {
        &self.unit
    }

    fn check(&self, m: &Module) -> Result<()> {
        if same_algebra(&self.algebra, m.algebra()) {
            Ok(())
        } else {
            Err(Error::Usage("module is over a different algebra than the tensor structure".into()))
        }
    }

    /// `M ⊗ N` with its presentation as a quotient of `M ⊗_k N`.
    pub fn tensor(&self, m: &Module, n: &Module) -> Result<TensorProduct> {
        self.check(m)?;
        self.check(n)?;
        let p = self.algebra.p();
        let (dm, dn) = (m.dim(), n.dim());
        let im = Matrix::identity(p, dm);
        let inn = Matrix::identity(p, dn);
        match self.kind {
            TensorKind::Commutative => {
                let mut relators = Vec::new();
                for b in 0..self.algebra.dim() {
                    let r = m.action()[b].kron(&inn).sub(&im.kron(&n.action()[b]));
                    relators.extend(r.columns());
                }
                let q = Quotient::new(Subspace::from_spanning(p, dm * dn, &relators));
                let action = (0..self.algebra.dim())
                    .map(|b| q.induced(&q, &m.action()[b].kron(&inn)))
                    .collect();
                let module = Module::from_action_unchecked(self.algebra.clone(), action)?;
                Ok(TensorProduct { module, projection: q.projection_matrix(), section: q.section_matrix() })
            }
            TensorKind::Hopf => {
                let hopf = self.algebra.hopf().expect("checked at construction");
                let d = self.algebra.dim();
                let action = hopf
                    .comul
                    .iter()
                    .map(|delta| {
                        let mut acc = Matrix::zeros(p, dm * dn, dm * dn);
                        for (idx, &c) in delta.iter().enumerate() {
                            if c != 0 {
                                acc.add_scaled(c, &m.action()[idx / d].kron(&n.action()[idx % d]));
                            }
                        }
                        acc
                    })
                    .collect();
                let module = Module::from_action_unchecked(self.algebra.clone(), action)?;
                let id = Matrix::identity(p, dm * dn);
                Ok(TensorProduct { module, projection: id.clone(), section: id })
            }
        }
    }

    pub fn tensor_obj(&self, m: &Module, n: &Module) -> Result<Module> {
        Ok(self.tensor(m, n)?.module)
    }

    /// `f ⊗ g: A ⊗ U -> B ⊗ V`.
    pub fn tensor_mor(&self, f: &ModuleMorphism, g: &ModuleMorphism) -> Result<ModuleMorphism> {
        let src = self.tensor(f.source(), g.source())?;
        let tgt = self.tensor(f.target(), g.target())?;
        let m = tgt.projection.mul(&f.matrix().kron(g.matrix())).mul(&src.section);
        Ok(ModuleMorphism::new_unchecked(src.module, tgt.module, m))
    }

    /// `f ⊗ V` for a fixed object.
    pub fn tensor_mor_obj(&self, f: &ModuleMorphism, v: &Module) -> Result<ModuleMorphism> {
        self.tensor_mor(f, &v.identity())
    }

    /// `A ⊗ g` for a fixed object.
    pub fn tensor_obj_mor(&self, a: &Module, g: &ModuleMorphism) -> Result<ModuleMorphism> {
        self.tensor_mor(&a.identity(), g)
    }

    pub fn internal_hom(&self, m: &Module, n: &Module) -> Result<InternalHom> {
        self.check(m)?;
        self.check(n)?;
        let p = self.algebra.p();
        let (dm, dn) = (m.dim(), n.dim());
        match self.kind {
            TensorKind::Commutative => {
                let hom = hom_space(m, n)?;
                let action: Vec<Matrix> = n.action().iter().map(|a| a.kron(&Matrix::identity(p, dm))).collect();
                let big = Module::from_action_unchecked(self.algebra.clone(), action)?;
                let (module, incl) = big.submodule(hom.space())?;
                let basis = incl
                    .matrix()
                    .columns()
                    .into_iter()
                    .map(|v| Matrix::from_data(p, dn, dm, v))
                    .collect();
                Ok(InternalHom { module, basis })
            }
            TensorKind::Hopf => {
                let hopf = self.algebra.hopf().expect("checked at construction");
                let d = self.algebra.dim();
                let antipode_on_m: Vec<Matrix> =
                    hopf.antipode.iter().map(|s| m.act(s)).collect();
                let action = hopf
                    .comul
                    .iter()
                    .map(|delta| {
                        let mut acc = Matrix::zeros(p, dm * dn, dm * dn);
                        for (idx, &c) in delta.iter().enumerate() {
                            if c != 0 {
                                // X -> A X B on row-major vectors is kron(A, B^T)
                                let a = &n.action()[idx / d];
                                let b = &antipode_on_m[idx % d];
                                acc.add_scaled(c, &a.kron(&b.transpose()));
                            }
                        }
                        acc
                    })
                    .collect();
                let module = Module::from_action_unchecked(self.algebra.clone(), action)?;
                let basis = (0..dm * dn)
                    .map(|i| {
                        let mut x = Matrix::zeros(p, dn, dm);
                        x.set(i / dm, i % dm, 1);
                        x
                    })
                    .collect();
                Ok(InternalHom { module, basis })
            }
        }
    }

    /// Left unitor `1 ⊗ M -> M`.
    pub fn left_unitor(&self, m: &Module) -> Result<ModuleMorphism> {
        let t = self.tensor(&self.unit, m)?;
        let p = self.algebra.p();
        let du = self.unit.dim();
        let mut cols = vec![Vec::new(); du * m.dim()];
        for i in 0..du {
            for j in 0..m.dim() {
                cols[i * m.dim() + j] = self.unit_action(m, i, j);
            }
        }
        let kron_map = Matrix::from_columns(p, m.dim(), &cols);
        Ok(ModuleMorphism::new_unchecked(t.module, m.clone(), kron_map.mul(&t.section)))
    }

    /// Right unitor `M ⊗ 1 -> M`.
    pub fn right_unitor(&self, m: &Module) -> Result<ModuleMorphism> {
        let t = self.tensor(m, &self.unit)?;
        let p = self.algebra.p();
        let du = self.unit.dim();
        let mut cols = vec![Vec::new(); du * m.dim()];
        for j in 0..m.dim() {
            for i in 0..du {
                cols[j * du + i] = self.unit_action(m, i, j);
            }
        }
        let kron_map = Matrix::from_columns(p, m.dim(), &cols);
        Ok(ModuleMorphism::new_unchecked(t.module, m.clone(), kron_map.mul(&t.section)))
    }

    /// Image of `u_i ⊗ m_j` under the unit isomorphism.
    fn unit_action(&self, m: &Module, i: usize, j: usize) -> Vec<u8> {
        match self.kind {
            TensorKind::Commutative => m.action()[i].column(j),
            TensorKind::Hopf => {
                let mut v = vec![0u8; m.dim()];
                v[j] = 1;
                v
            }
        }
    }

    /// Associator `(A ⊗ B) ⊗ C -> A ⊗ (B ⊗ C)`.
    pub fn associator(&self, a: &Module, b: &Module, c: &Module) -> Result<ModuleMorphism> {
        let p = self.algebra.p();
        let ab = self.tensor(a, b)?;
        let bc = self.tensor(b, c)?;
        let ab_c = self.tensor(&ab.module, c)?;
        let a_bc = self.tensor(a, &bc.module)?;
        let ia = Matrix::identity(p, a.dim());
        let ic = Matrix::identity(p, c.dim());
        let m = a_bc
            .projection
            .mul(&ia.kron(&bc.projection))
            .mul(&ab.section.kron(&ic))
            .mul(&ab_c.section);
        Ok(ModuleMorphism::new_unchecked(ab_c.module, a_bc.module, m))
    }

    /// Inverse associator `A ⊗ (B ⊗ C) -> (A ⊗ B) ⊗ C`.
    pub fn associator_inverse(&self, a: &Module, b: &Module, c: &Module) -> Result<ModuleMorphism> {
        let p = self.algebra.p();
        let ab = self.tensor(a, b)?;
        let bc = self.tensor(b, c)?;
        let ab_c = self.tensor(&ab.module, c)?;
        let a_bc = self.tensor(a, &bc.module)?;
        let ia = Matrix::identity(p, a.dim());
        let ic = Matrix::identity(p, c.dim());
        let m = ab_c
            .projection
            .mul(&ab.projection.kron(&ic))
            .mul(&ia.kron(&bc.section))
            .mul(&a_bc.section);
        Ok(ModuleMorphism::new_unchecked(a_bc.module, ab_c.module, m))
    }

    /// Dual object, found by solving the snake identities for the coevaluation
    /// given the evaluation `M ⊗ hom(M, 1) -> 1`.
    pub fn dual_object(&self, m: &Module) -> Result<Dual> {
        self.check(m)?;
        let p = self.algebra.p();
        let ih = self.internal_hom(m, &self.unit)?;
        let dual = ih.module.clone();
        let functionals = ih.basis.clone();
        let (dm, dd) = (m.dim(), dual.dim());
        let du = self.unit.dim();

        let m_md = self.tensor(m, &dual)?;
        let mut cols = vec![Vec::new(); dm * dd];
        for i in 0..dm {
            for (j, phi) in functionals.iter().enumerate() {
                cols[i * dd + j] = phi.column(i);
            }
        }
        let eval_kron = Matrix::from_columns(p, du, &cols);
        let eval = ModuleMorphism::new(m_md.module.clone(), self.unit.clone(), eval_kron.mul(&m_md.section))
            .map_err(|_| self.rigidity_error("evaluation is not a module map"))?;

        // snake maps as linear functions of the coevaluation
        let md_m = self.tensor(&dual, m)?;
        let candidates = hom_space(&self.unit, &md_m.module)?;
        let rho_m_inv = invert(&self.right_unitor(m)?)?;
        let lambda_m = self.left_unitor(m)?;
        let lambda_d_inv = invert(&self.left_unitor(&dual)?)?;
        let rho_d = self.right_unitor(&dual)?;
        let assoc_inv = self.associator_inverse(m, &dual, m)?;
        let assoc = self.associator(&dual, m, &dual)?;
        let eval_c = self.tensor_mor(&eval, &m.identity())?;
        let d_eval = self.tensor_mor(&dual.identity(), &eval)?;

        let mut columns = Vec::new();
        for eta in candidates.morphisms() {
            // (ε ⊗ M)(M ⊗ η) = id_M
            let s2 = lambda_m
                .compose(&eval_c)?
                .compose(&assoc_inv)?
                .compose(&self.tensor_mor(&m.identity(), &eta)?)?
                .compose(&rho_m_inv)?;
            // (M^∨ ⊗ ε)(η ⊗ M^∨) = id_{M^∨}
            let s1 = rho_d
                .compose(&d_eval)?
                .compose(&assoc)?
                .compose(&self.tensor_mor(&eta, &dual.identity())?)?
                .compose(&lambda_d_inv)?;
            let mut v = s2.matrix().to_vec();
            v.extend(s1.matrix().to_vec());
            columns.push(v);
        }
        let mut target = Matrix::identity(p, dm).to_vec();
        target.extend(Matrix::identity(p, dd).to_vec());
        let system = Matrix::from_columns(p, target.len(), &columns);
        let coeffs = system
            .solve(&target)?
            .ok_or_else(|| self.rigidity_error("the snake identities have no solution"))?;
        let coeval_matrix = candidates.element(&coeffs);
        let coeval = ModuleMorphism::new(self.unit.clone(), md_m.module, coeval_matrix)?;
        Ok(Dual { module: dual, functionals, eval, coeval })
    }

    fn rigidity_error(&self, what: &str) -> Error {
        match self.kind {
            TensorKind::Commutative => Error::NotRigid(format!("module has no dual under ⊗_R: {what}")),
            TensorKind::Hopf => Error::Validation(format!("Hopf data inconsistent: {what}")),
        }
    }

    /// `f^∨: B^∨ -> A^∨` as the composite
    /// `B^∨ -> 1 ⊗ B^∨ -> A^∨ ⊗ A ⊗ B^∨ -> A^∨ ⊗ B ⊗ B^∨ -> A^∨ ⊗ 1 -> A^∨`.
    pub fn dual_morphism(&self, f: &ModuleMorphism) -> Result<ModuleMorphism> {
        let (a, b) = (f.source(), f.target());
        let da = self.dual_object(a)?;
        let db = self.dual_object(b)?;
        let lambda_inv = invert(&self.left_unitor(&db.module)?)?;
        let step1 = self.tensor_mor(&da.coeval, &db.module.identity())?;
        let step2 = self.tensor_mor(&self.tensor_mor(&da.module.identity(), f)?, &db.module.identity())?;
        let step3 = self.associator(&da.module, b, &db.module)?;
        let step4 = self.tensor_mor(&da.module.identity(), &db.eval)?;
        let rho = self.right_unitor(&da.module)?;
        rho.compose(&step4)?
            .compose(&step3)?
            .compose(&step2)?
            .compose(&step1)?
            .compose(&lambda_inv)
    }
}

fn invert(f: &ModuleMorphism) -> Result<ModuleMorphism> {
    let inv = f
        .matrix()
        .inverse()
        .ok_or_else(|| Error::Validation("structure map is not invertible".into()))?;
    Ok(ModuleMorphism::new_unchecked(f.target().clone(), f.source().clone(), inv))
}

/// One failed rigidity check.
#[derive(Clone, Debug, Serialize)]
pub struct RigidityFailure {
    pub object: String,
    pub other: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub structure: TensorKind,
    pub failures: Vec<RigidityFailure>,
}

impl RigidityReport {
    pub fn is_rigid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every registry pair `(C, X)` checks that `C` has a dual and that
/// `hom(C, X) ≅ C^∨ ⊗ X`.
pub fn verify_rigidity(t: &TensorStructure, reg: &IndecRegistry) -> Result<RigidityReport> {
    let mut failures = Vec::new();
    for (ci, c) in reg.items().iter().enumerate() {
        let dual = match t.dual_object(c) {
            Ok(d) => Some(d),
            Err(Error::NotRigid(reason)) | Err(Error::Validation(reason)) => {
                for xi in 0..reg.len() {
                    failures.push(RigidityFailure {
                        object: reg.name(ci).to_string(),
                        other: reg.name(xi).to_string(),
                        reason: reason.clone(),
                    });
                }
                None
            }
            Err(e) => return Err(e),
        };
        let Some(dual) = dual else { continue };
        for (xi, x) in reg.items().iter().enumerate() {
            let hom = t.internal_hom(c, x)?.module;
            let tens = t.tensor_obj(&dual.module, x)?;
            if is_isomorphic(&hom, &tens)?.is_none() {
                failures.push(RigidityFailure {
                    object: reg.name(ci).to_string(),
                    other: reg.name(xi).to_string(),
                    reason: "hom(C, X) is not isomorphic to C^∨ ⊗ X".into(),
                });
            }
        }
    }
    Ok(RigidityReport { structure: t.kind, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_group_algebra, build_product_algebra, build_truncated_poly};
    use crate::modcat::{decompose, direct_sum};

    fn dual_numbers() -> (TensorStructure, Module, Module) {
        let a = Arc::new(build_truncated_poly(2, 2).unwrap());
        let r = Module::regular(a.clone());
        let u = Module::new(a.clone(), vec![Matrix::identity(2, 1), Matrix::zeros(2, 1, 1)]).unwrap();
        (TensorStructure::commutative(a).unwrap(), r, u)
    }

    fn group_c2() -> (TensorStructure, Module, Module) {
        let a = Arc::new(build_group_algebra(2, 2).unwrap());
        let r = Module::regular(a.clone());
        let u = Module::new(a.clone(), vec![Matrix::identity(2, 1), Matrix::identity(2, 1)]).unwrap();
        (TensorStructure::hopf(a).unwrap(), r, u)
    }

    fn iso(a: &Module, b: &Module) -> bool {
        is_isomorphic(a, b).unwrap().is_some()
    }

    #[test]
    fn tensor_over_r_examples() {
        let (t, r, u) = dual_numbers();
        assert!(iso(&t.tensor_obj(&r, &r).unwrap(), &r));
        assert!(iso(&t.tensor_obj(&r, &u).unwrap(), &u));
        assert!(iso(&t.tensor_obj(&u, &u).unwrap(), &u));
        for m in [&r, &u] {
            assert!(t.left_unitor(m).unwrap().is_iso());
            assert!(t.right_unitor(m).unwrap().is_iso());
        }
    }

    #[test]
    fn hopf_tensor_examples() {
        let (t, r, u) = group_c2();
        let rr = t.tensor_obj(&r, &r).unwrap();
        let r2 = direct_sum(t.algebra(), &[r.clone(), r.clone()]).unwrap().module;
        assert!(iso(&rr, &r2));
        assert!(iso(&t.tensor_obj(&u, &r).unwrap(), &r));
        assert_eq!(t.unit(), &u);
    }

    #[test]
    fn internal_hom_examples() {
        let (t, r, u) = dual_numbers();
        assert!(iso(&t.internal_hom(&r, &u).unwrap().module, &u));
        assert!(iso(&t.internal_hom(&u, &u).unwrap().module, &u));
        assert!(iso(&t.internal_hom(&u, &r).unwrap().module, &u));
        assert!(iso(&t.internal_hom(&r, &r).unwrap().module, &r));
    }

    #[test]
    fn duals_under_hopf() {
        let (t, r, u) = group_c2();
        let du = t.dual_object(&u).unwrap();
        assert!(iso(&du.module, &u));
        let dr = t.dual_object(&r).unwrap();
        assert!(iso(&dr.module, &r));
    }

    #[test]
    fn dual_numbers_not_rigid_at_u() {
        let (t, r, u) = dual_numbers();
        assert!(t.dual_object(&r).is_ok());
        assert!(matches!(t.dual_object(&u), Err(Error::NotRigid(_))));
    }

    #[test]
    fn semisimple_commutative_is_rigid() {
        let a = Arc::new(build_product_algebra(2, 2).unwrap());
        let t = TensorStructure::commutative(a.clone()).unwrap();
        let reg = crate::modcat::auto_registry(&a, 1, 1 << 10).unwrap();
        assert!(verify_rigidity(&t, &reg).unwrap().is_rigid());
    }

    #[test]
    fn dual_morphism_of_projection_is_injective() {
        let (t, r, u) = group_c2();
        let pmap = ModuleMorphism::new(r.clone(), u.clone(), Matrix::from_rows(2, 2, &[vec![1, 1]]).unwrap()).unwrap();
        let pd = t.dual_morphism(&pmap).unwrap();
        assert!(pd.is_injective());
        assert!(t.dual_morphism(&r.identity()).unwrap().matrix().is_identity());
    }

    #[test]
    fn decompose_r_tensor_r_hopf() {
        let (t, r, u) = group_c2();
        let reg = IndecRegistry::new(t.algebra().clone(), vec![("R".into(), r.clone()), ("U".into(), u)], Some(2))
            .unwrap();
        let rr = t.tensor_obj(&r, &r).unwrap();
        assert_eq!(decompose(&rr, &reg).unwrap(), vec![(1, 2)]);
    }
}
