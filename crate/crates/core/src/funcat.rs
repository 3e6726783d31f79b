//! Finitely presented functors on the module category.
//!
//! A morphism `f: A -> B` presents the covariant functor
//! `F_f = coker((B, -) -> (A, -))`, so `F_f(M) = Hom(A, M) / (Hom(B, M) ∘ f)`.
//! A natural transformation `F_f -> F_g` with `g: U -> V` is stored as a lift
//! `α₁: U -> A`; it acts by `[φ] -> [φ ∘ α₁]`.
//!
//! Kernels, decompositions and projective dimensions are computed by
//! evaluating at every registry item, which turns a functor into a module
//! over the endomorphism algebra `Γ` of the direct sum of the registry
//! (see [`Auslander`]).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactla::{self, Matrix, Quotient, Subspace};
use crate::modcat::{
    block_morphism, direct_sum, divides, hom_space, indecomposable_iso, is_isomorphic, local_radical,
    same_algebra, split_indecomposables, HomSpace, IndecRegistry, Module, ModuleMorphism,
};
use crate::monoidal::TensorStructure;

/// The functor `F_f` presented by `f: A -> B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpFunctor {
    f: ModuleMorphism,
}

impl FpFunctor {
    pub fn new(f: ModuleMorphism) -> Self {
        Self { f }
    }

    /// The representable functor `(C, -)`, presented by `C -> 0`.
    pub fn yoneda(c: &Module) -> Self {
        let zero = Module::zero(c.algebra().clone());
        Self { f: ModuleMorphism::zero(c, &zero) }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Self::yoneda(&Module::zero(algebra.clone()))
    }

    pub fn presentation(&self) -> &ModuleMorphism {
        &self.f
    }

    /// `A` in `f: A -> B`.
    pub fn source(&self) -> &Module {
        self.f.source()
    }

    /// `B` in `f: A -> B`.
    pub fn target(&self) -> &Module {
        self.f.target()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.f.source().algebra()
    }

    /// `F_f = 0` iff `f` is a split monomorphism.
    pub fn is_zero(&self) -> Result<bool> {
        divides(&self.f, &self.source().identity())
    }
}

/// `F(M)` as a quotient of `Hom(A, M)`, in coordinates of its Hom basis.
#[derive(Clone, Debug)]
pub struct Evaluation {
    hom: HomSpace,
    quotient: Quotient,
}

impl Evaluation {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Class of a morphism `A -> M`.
    pub fn project(&self, phi: &Matrix) -> Result<Vec<u8>> {
        let coords = self
            .hom
            .coordinates(phi)
            .ok_or_else(|| Error::Validation("not a module map out of the presenting object".into()))?;
        Ok(self.quotient.project(&coords))
    }

    /// Canonical representative `A -> M` of a class.
    pub fn lift(&self, coords: &[u8]) -> Matrix {
        self.hom.element(&self.quotient.lift(coords))
    }

    pub fn hom(&self) -> &HomSpace {
        &self.hom
    }
}

pub fn evaluate(f: &FpFunctor, m: &Module) -> Result<Evaluation> {
    let hom = hom_space(f.source(), m)?;
    let hb = hom_space(f.target(), m)?;
    let relations: Vec<Vec<u8>> = hb
        .basis()
        .iter()
        .map(|psi| hom.coordinates(&psi.mul(f.presentation().matrix())).expect("composite is a module map"))
        .collect();
    let quotient = Quotient::new(Subspace::from_spanning(m.p(), hom.dim(), &relations));
    Ok(Evaluation { hom, quotient })
}

/// Matrix of `F(m): F(M) -> F(N)`.
pub fn evaluate_mor(f: &FpFunctor, m: &ModuleMorphism) -> Result<Matrix> {
    let src = evaluate(f, m.source())?;
    let tgt = evaluate(f, m.target())?;
    induced_map(&src, &tgt, |phi| m.matrix().mul(phi))
}

fn induced_map(src: &Evaluation, tgt: &Evaluation, op: impl Fn(&Matrix) -> Matrix) -> Result<Matrix> {
    let p = src.hom.source().p();
    let cols = (0..src.dim())
        .map(|c| {
            let mut e = vec![0u8; src.dim()];
            e[c] = 1;
            tgt.project(&op(&src.lift(&e)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(p, tgt.dim(), &cols))
}

/// A natural transformation `F_f -> F_g` given by a lift `α₁: U -> A`.
#[derive(Clone, Debug)]
pub struct NatTransf {
    source: FpFunctor,
    target: FpFunctor,
    lift: Matrix,
}

impl NatTransf {
    /// Checks the descent condition `f ∘ α₁ = α₂ ∘ g` for some `α₂`.
    pub fn new(source: FpFunctor, target: FpFunctor, lift: Matrix) -> Result<Self> {
        let a1 = ModuleMorphism::new(target.source().clone(), source.source().clone(), lift.clone())?;
        let composite = source.presentation().compose(&a1)?;
        if !divides(target.presentation(), &composite)? {
            return Err(Error::Validation("lift does not descend to a natural transformation".into()));
        }
        Ok(Self { source, target, lift })
    }

    pub(crate) fn new_unchecked(source: FpFunctor, target: FpFunctor, lift: Matrix) -> Self {
        Self { source, target, lift }
    }

    pub fn identity(f: &FpFunctor) -> Self {
        Self::new_unchecked(f.clone(), f.clone(), Matrix::identity(f.algebra().p(), f.source().dim()))
    }

    pub fn zero(f: &FpFunctor, g: &FpFunctor) -> Self {
        Self::new_unchecked(f.clone(), g.clone(), Matrix::zeros(f.algebra().p(), f.source().dim(), g.source().dim()))
    }

    pub fn source(&self) -> &FpFunctor {
        &self.source
    }

    pub fn target(&self) -> &FpFunctor {
        &self.target
    }

    pub fn lift(&self) -> &Matrix {
        &self.lift
    }

    /// Component `F(M) -> G(M)`.
    pub fn at(&self, m: &Module) -> Result<Matrix> {
        let src = evaluate(&self.source, m)?;
        let tgt = evaluate(&self.target, m)?;
        induced_map(&src, &tgt, |phi| phi.mul(&self.lift))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &NatTransf) -> Result<NatTransf> {
        if first.target.source().dim() != self.source.source().dim() {
            return Err(Error::Usage("composition of non-composable natural transformations".into()));
        }
        Ok(Self::new_unchecked(first.source.clone(), self.target.clone(), first.lift.mul(&self.lift)))
    }

    pub fn add(&self, other: &NatTransf) -> Result<NatTransf> {
        if self.lift.rows() != other.lift.rows() || self.lift.cols() != other.lift.cols() {
            return Err(Error::Usage("sum of natural transformations with different endpoints".into()));
        }
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.lift.add(&other.lift)))
    }

    pub fn scale(&self, c: u8) -> NatTransf {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.lift.scale(c))
    }

    /// Zero iff the lift factors through `g`.
    pub fn is_zero(&self) -> Result<bool> {
        let ev = evaluate(&self.target, self.source.source())?;
        Ok(ev.project(&self.lift)?.iter().all(|&x| x == 0))
    }

    pub fn same_as(&self, other: &NatTransf) -> Result<bool> {
        self.add(&other.scale(exactla::neg(self.lift.p(), 1)))?.is_zero()
    }
}

/// Basis of `Nat(F_f, G)`, via `Nat(F_f, G) ≅ ker G(f) ⊆ G(A)`.
pub fn nat_hom(f: &FpFunctor, g: &FpFunctor) -> Result<Vec<NatTransf>> {
    let ga = evaluate(g, f.source())?;
    let gb = evaluate(g, f.target())?;
    let gf = induced_map(&ga, &gb, |phi| f.presentation().matrix().mul(phi))?;
    Ok(gf
        .nullspace()
        .into_iter()
        .map(|v| NatTransf::new_unchecked(f.clone(), g.clone(), ga.lift(&v)))
        .collect())
}

/// Cokernel `F_{(α₁, g)}` of `α: F_f -> F_g`, with the projection `F_g -> coker`.
pub fn nat_cokernel(alpha: &NatTransf) -> Result<(FpFunctor, NatTransf)> {
    let a1 = ModuleMorphism::new(
        alpha.target.source().clone(),
        alpha.source.source().clone(),
        alpha.lift.clone(),
    )?;
    let g = alpha.target.presentation();
    let algebra = g.source().algebra().clone();
    let h = block_morphism(
        &algebra,
        &[g.source().clone()],
        &[a1.target().clone(), g.target().clone()],
        &[vec![a1.matrix().clone()], vec![g.matrix().clone()]],
    )?;
    let coker = FpFunctor::new(h);
    let p = algebra.p();
    let proj = NatTransf::new_unchecked(alpha.target.clone(), coker.clone(), Matrix::identity(p, g.source().dim()));
    Ok((coker, proj))
}

/// `F_f ⊗ F_g = F_{(f ⊗ U, A ⊗ g)}` with `(f ⊗ U, A ⊗ g): A ⊗ U -> (B ⊗ U) ⊕ (A ⊗ V)`.
pub fn day_tensor(f: &FpFunctor, g: &FpFunctor, t: &TensorStructure) -> Result<FpFunctor> {
    let (fm, gm) = (f.presentation(), g.presentation());
    let a = fm.source();
    let u = gm.source();
    let f_u = t.tensor_mor(fm, &u.identity())?;
    let a_g = t.tensor_mor(&a.identity(), gm)?;
    let h = block_morphism(
        t.algebra(),
        &[f_u.source().clone()],
        &[f_u.target().clone(), a_g.target().clone()],
        &[vec![f_u.matrix().clone()], vec![a_g.matrix().clone()]],
    )?;
    Ok(FpFunctor::new(h))
}

/// `K ⊗ α: K ⊗ F -> K ⊗ G`, with lift `C ⊗ α₁` where `K` is presented on `C`.
pub fn day_tensor_nat(k: &FpFunctor, alpha: &NatTransf, t: &TensorStructure) -> Result<NatTransf> {
    let src = day_tensor(k, &alpha.source, t)?;
    let tgt = day_tensor(k, &alpha.target, t)?;
    let c = k.source();
    let a1 = ModuleMorphism::new_unchecked(
        alpha.target.source().clone(),
        alpha.source.source().clone(),
        alpha.lift.clone(),
    );
    let lift = t.tensor_mor(&c.identity(), &a1)?;
    Ok(NatTransf::new_unchecked(src, tgt, lift.matrix().clone()))
}

// ---------------------------------------------------------------------------
// Transport to modules over the Auslander algebra
// ---------------------------------------------------------------------------

/// The endomorphism algebra `Γ` of `⊕ E_i` over a registry, with Hom bases.
///
/// `Γ` has basis the Hom-basis elements `φ: E_i -> E_j`, ordered by `(i, j)`
/// then Hom-basis position; the product is composition when composable and
/// zero otherwise. A covariant functor `F` becomes the `Γ`-module
/// `⊕ F(E_i)` with `φ` acting as `F(φ)` from block `i` to block `j`.
#[derive(Clone, Debug)]
pub struct Auslander {
    registry: IndecRegistry,
    homs: Vec<Vec<HomSpace>>,
    offsets: Vec<Vec<usize>>,
    /// `(source, target, position)` of each basis element.
    index: Vec<(usize, usize, usize)>,
    gamma: Arc<Algebra>,
    radical: Vec<Vec<u8>>,
}

/// A functor recovered from a `Γ`-module, with the generators used.
#[derive(Clone, Debug)]
pub struct FromGamma {
    pub functor: FpFunctor,
    /// `(registry index, vector in the input module)` per summand of the presenting source.
    pub generators: Vec<(usize, Vec<u8>)>,
}

impl Auslander {
    pub fn new(registry: IndecRegistry) -> Result<Self> {
        let n = registry.len();
        let items = registry.items().to_vec();
        let p = registry.algebra().p();
        let mut homs = Vec::with_capacity(n);
        for a in &items {
            homs.push(items.iter().map(|b| hom_space(a, b)).collect::<Result<Vec<_>>>()?);
        }
        let mut offsets = vec![vec![0usize; n]; n];
        let mut index = Vec::new();
        for i in 0..n {
            for j in 0..n {
                offsets[i][j] = index.len();
                for t in 0..homs[i][j].dim() {
                    index.push((i, j, t));
                }
            }
        }
        let d = index.len();
        let mut mul = vec![vec![vec![0u8; d]; d]; d];
        for (x, &(i, j, t)) in index.iter().enumerate() {
            for (y, &(k, l, s)) in index.iter().enumerate() {
                if l != i {
                    continue;
                }
                let comp = homs[i][j].basis()[t].mul(&homs[k][i].basis()[s]);
                let coords = homs[k][j].coordinates(&comp).expect("composite of module maps");
                let off = offsets[k][j];
                mul[x][y][off..off + coords.len()].copy_from_slice(&coords);
            }
        }
        let mut unit = vec![0u8; d];
        for (i, item) in items.iter().enumerate() {
            let coords = homs[i][i]
                .coordinates(&Matrix::identity(p, item.dim()))
                .expect("identity is a module map");
            let off = offsets[i][i];
            unit[off..off + coords.len()].copy_from_slice(&coords);
        }
        let names = index
            .iter()
            .map(|&(i, j, t)| format!("{}->{}#{}", registry.name(i), registry.name(j), t))
            .collect();
        let gamma = Algebra::from_parts(p, names, mul, unit, false, None)?.with_generators((0..d).collect());

        let mut radical = Vec::new();
        for (x, &(i, j, _)) in index.iter().enumerate() {
            if i != j {
                let mut v = vec![0u8; d];
                v[x] = 1;
                radical.push(v);
            }
        }
        for (i, item) in items.iter().enumerate() {
            for r in local_radical(item)? {
                let coords = homs[i][i].coordinates(&r).expect("radical element is an endomorphism");
                let mut v = vec![0u8; d];
                v[offsets[i][i]..offsets[i][i] + coords.len()].copy_from_slice(&coords);
                radical.push(v);
            }
        }
        Ok(Self { registry, homs, offsets, index, gamma: Arc::new(gamma), radical })
    }

    pub fn registry(&self) -> &IndecRegistry {
        &self.registry
    }

    pub fn gamma(&self) -> &Arc<Algebra> {
        &self.gamma
    }

    pub fn hom(&self, i: usize, j: usize) -> &HomSpace {
        &self.homs[i][j]
    }

    fn identity_element(&self, i: usize) -> Vec<u8> {
        let p = self.gamma.p();
        let coords = self.homs[i][i]
            .coordinates(&Matrix::identity(p, self.registry.item(i).dim()))
            .expect("identity");
        let mut v = vec![0u8; self.gamma.dim()];
        v[self.offsets[i][i]..self.offsets[i][i] + coords.len()].copy_from_slice(&coords);
        v
    }

    /// `e_i X`, the part of a `Γ`-module sitting over registry item `i`.
    pub fn block(&self, x: &Module, i: usize) -> Subspace {
        x.act(&self.identity_element(i)).column_space()
    }

    pub fn block_dims(&self, x: &Module) -> Vec<usize> {
        (0..self.registry.len()).map(|i| self.block(x, i).dim()).collect()
    }

    /// `Γ`-module of a covariant additive functor given by its values on
    /// registry items and on Hom-basis elements.
    pub fn module_from_values(
        &self,
        dims: &[usize],
        map: impl Fn(usize, usize, &Matrix) -> Result<Matrix>,
    ) -> Result<Module> {
        let p = self.gamma.p();
        let mut starts = Vec::with_capacity(dims.len());
        let mut total = 0;
        for &d in dims {
            starts.push(total);
            total += d;
        }
        let mut action = Vec::with_capacity(self.index.len());
        for &(i, j, t) in &self.index {
            let m = map(i, j, &self.homs[i][j].basis()[t])?;
            let mut a = Matrix::zeros(p, total, total);
            a.write_block(starts[j], starts[i], &m);
            action.push(a);
        }
        Module::from_action_unchecked(self.gamma.clone(), action)
    }

    pub fn to_gamma(&self, f: &FpFunctor) -> Result<Module> {
        self.check(f)?;
        let evals = self
            .registry
            .items()
            .iter()
            .map(|e| evaluate(f, e))
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<usize> = evals.iter().map(|e| e.dim()).collect();
        self.module_from_values(&dims, |i, j, phi| induced_map(&evals[i], &evals[j], |x| phi.mul(x)))
    }

    /// Block-diagonal matrix of `α` between the `to_gamma` modules.
    pub fn nat_to_gamma(&self, alpha: &NatTransf) -> Result<Matrix> {
        let p = self.gamma.p();
        let blocks = self
            .registry
            .items()
            .iter()
            .map(|e| alpha.at(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::block_diag(p, &blocks))
    }

    fn check(&self, f: &FpFunctor) -> Result<()> {
        if same_algebra(f.algebra(), self.registry.algebra()) {
            Ok(())
        } else {
            Err(Error::Usage("functor and registry are over different algebras".into()))
        }
    }

    /// `rad X = Σ_r r X` over a basis of `rad Γ`.
    fn radical_of(&self, x: &Module) -> Subspace {
        let vecs: Vec<Vec<u8>> = self.radical.iter().flat_map(|r| x.act(r).columns()).collect();
        Subspace::from_spanning(x.p(), x.dim(), &vecs)
    }

    /// Generators of `X` lifting a basis of `X / rad X`, grouped by block.
    pub fn top_generators(&self, x: &Module) -> Vec<(usize, Vec<u8>)> {
        let rad = self.radical_of(x);
        let mut gens = Vec::new();
        for i in 0..self.registry.len() {
            let block = self.block(x, i);
            let inner = block.intersection(&rad).expect("same ambient");
            for v in inner.complement_in(&block) {
                gens.push((i, v));
            }
        }
        gens
    }

    /// `Γ`-module of `⊕_k (E_{i_k}, -)` and the map sending the `k`-th
    /// identity to `gens[k]`. Coordinates are grouped by `k`, then by Hom block.
    fn projective_cover(&self, x: &Module, gens: &[(usize, Vec<u8>)]) -> Result<(Module, Matrix)> {
        let p = self.gamma.p();
        let n = self.registry.len();
        // component k: blocks (i_k, j) for all j, with local offsets
        let comp_dims: Vec<usize> = gens.iter().map(|&(i, _)| (0..n).map(|j| self.homs[i][j].dim()).sum()).collect();
        let total: usize = comp_dims.iter().sum();
        let mut action = Vec::with_capacity(self.index.len());
        for &(a, b, t) in &self.index {
            let phi = &self.homs[a][b].basis()[t];
            let mut m = Matrix::zeros(p, total, total);
            let mut base = 0;
            for (&(i, _), &cd) in gens.iter().zip(&comp_dims) {
                let local = |j: usize| (0..j).map(|jj| self.homs[i][jj].dim()).sum::<usize>();
                for s in 0..self.homs[i][a].dim() {
                    let comp = phi.mul(&self.homs[i][a].basis()[s]);
                    let coords = self.homs[i][b].coordinates(&comp).expect("module map");
                    for (r, &c) in coords.iter().enumerate() {
                        m.set(base + local(b) + r, base + local(a) + s, c);
                    }
                }
                base += cd;
            }
            action.push(m);
        }
        let cover = Module::from_action_unchecked(self.gamma.clone(), action)?;
        let mut cols = Vec::with_capacity(total);
        for (i, v) in gens {
            for j in 0..n {
                for t in 0..self.homs[*i][j].dim() {
                    let mut e = vec![0u8; self.gamma.dim()];
                    e[self.offsets[*i][j] + t] = 1;
                    cols.push(x.act(&e).mul_vec(v));
                }
            }
        }
        Ok((cover, Matrix::from_columns(p, x.dim(), &cols)))
    }

    /// Minimal presentation of the functor corresponding to a `Γ`-module.
    pub fn from_gamma(&self, x: &Module) -> Result<FromGamma> {
        let algebra = self.registry.algebra().clone();
        let gens = self.top_generators(x);
        let (cover, pi) = self.projective_cover(x, &gens)?;
        if pi.rank() != x.dim() {
            return Err(Error::Validation("module is not generated by its top".into()));
        }
        let (kernel, incl) = cover.submodule(&pi.kernel())?;
        let rels = self.top_generators(&kernel);
        let n = self.registry.len();
        let a_items: Vec<Module> = gens.iter().map(|&(i, _)| self.registry.item(i).clone()).collect();
        let b_items: Vec<Module> = rels.iter().map(|&(j, _)| self.registry.item(j).clone()).collect();
        let comp_dims: Vec<usize> = gens.iter().map(|&(i, _)| (0..n).map(|j| self.homs[i][j].dim()).sum()).collect();
        let mut blocks = Vec::with_capacity(rels.len());
        for (j, y) in &rels {
            let y = incl.matrix().mul_vec(y);
            let mut row = Vec::with_capacity(gens.len());
            let mut base = 0;
            for (&(i, _), &cd) in gens.iter().zip(&comp_dims) {
                let local: usize = (0..*j).map(|jj| self.homs[i][jj].dim()).sum();
                let coords = &y[base + local..base + local + self.homs[i][*j].dim()];
                row.push(self.homs[i][*j].element(coords));
                base += cd;
            }
            blocks.push(row);
        }
        let f = if b_items.is_empty() {
            let a = direct_sum(&algebra, &a_items)?.module;
            ModuleMorphism::zero(&a, &Module::zero(algebra.clone()))
        } else {
            block_morphism(&algebra, &a_items, &b_items, &blocks)?
        };
        Ok(FromGamma { functor: FpFunctor::new(f), generators: gens })
    }

    /// Length of a minimal projective resolution.
    pub fn pdim(&self, f: &FpFunctor) -> Result<usize> {
        let mut x = self.to_gamma(f)?;
        for step in 0..=2 * self.gamma.dim() + 2 {
            if x.is_zero() {
                return Ok(step.saturating_sub(1));
            }
            let gens = self.top_generators(&x);
            let (cover, pi) = self.projective_cover(&x, &gens)?;
            let (kernel, _) = cover.submodule(&pi.kernel())?;
            if kernel.is_zero() {
                return Ok(step);
            }
            x = kernel;
        }
        Err(Error::BudgetExceeded("projective resolution did not terminate".into()))
    }

    /// Decomposition of a module into registry items, as inclusions and projections.
    fn registry_summands(&self, a: &Module) -> Result<Vec<(usize, Matrix, Matrix)>> {
        let mut out = Vec::new();
        for s in split_indecomposables(a)? {
            let idx = self
                .registry
                .match_indecomposable(&s.module)?
                .ok_or_else(|| Error::RegistryIncomplete { summand: Box::new(s.module.clone()) })?;
            let iso = indecomposable_iso(self.registry.item(idx), &s.module)?.expect("matched");
            let inv = iso.inverse().expect("isomorphism");
            out.push((idx, s.inclusion.mul(&iso), inv.mul(&s.projection)));
        }
        Ok(out)
    }

    /// The natural transformation `F -> G` whose `Γ`-matrix is `theta`
    /// (from `to_gamma(F)` to `to_gamma(G)`).
    pub fn nat_from_gamma(&self, f: &FpFunctor, g: &FpFunctor, theta: &Matrix) -> Result<NatTransf> {
        let p = self.gamma.p();
        let f_blocks = self.eval_offsets(f)?;
        let g_blocks = self.eval_offsets(g)?;
        let a = f.source();
        let mut lift = Matrix::zeros(p, a.dim(), g.source().dim());
        for (idx, inc, proj) in self.registry_summands(a)? {
            let ev_f = evaluate(f, self.registry.item(idx))?;
            let ev_g = evaluate(g, self.registry.item(idx))?;
            let x = ev_f.project(&proj)?;
            let mut full = vec![0u8; theta.cols()];
            full[f_blocks[idx]..f_blocks[idx] + x.len()].copy_from_slice(&x);
            let y_full = theta.mul_vec(&full);
            let y = &y_full[g_blocks[idx]..g_blocks[idx] + ev_g.dim()];
            lift = lift.add(&inc.mul(&ev_g.lift(y)));
        }
        Ok(NatTransf::new_unchecked(f.clone(), g.clone(), lift))
    }

    fn eval_offsets(&self, f: &FpFunctor) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        let mut acc = 0;
        for e in self.registry.items() {
            out.push(acc);
            acc += evaluate(f, e)?.dim();
        }
        Ok(out)
    }

    /// Kernel of `α` with its inclusion.
    pub fn nat_kernel(&self, alpha: &NatTransf) -> Result<(FpFunctor, NatTransf)> {
        let src = self.to_gamma(&alpha.source)?;
        let theta = self.nat_to_gamma(alpha)?;
        let (k, incl) = src.submodule(&theta.kernel())?;
        let fg = self.from_gamma(&k)?;
        let kernel = fg.functor;
        // lift: A_F -> ⊕ E_{i_k}, assembled from representatives of the generators
        let p = self.gamma.p();
        let f = &alpha.source;
        let offs = self.eval_offsets(f)?;
        let mut rows = Vec::new();
        for (i, v) in &fg.generators {
            let x = incl.matrix().mul_vec(v);
            let ev = evaluate(f, self.registry.item(*i))?;
            let coords = &x[offs[*i]..offs[*i] + ev.dim()];
            rows.push(ev.lift(coords));
        }
        let lift = if rows.is_empty() {
            Matrix::zeros(p, 0, f.source().dim())
        } else {
            Matrix::vstack(p, f.source().dim(), &rows)
        };
        let inclusion = NatTransf::new_unchecked(kernel.clone(), f.clone(), lift);
        Ok((kernel, inclusion))
    }

    /// Isomorphism test for functors via their `Γ`-modules.
    pub fn functor_iso(&self, f: &FpFunctor, g: &FpFunctor) -> Result<bool> {
        Ok(is_isomorphic(&self.to_gamma(f)?, &self.to_gamma(g)?)?.is_some())
    }

    /// Whether `End(F)` is local.
    pub fn is_indecomposable(&self, f: &FpFunctor) -> Result<bool> {
        let x = self.to_gamma(f)?;
        if x.is_zero() {
            return Ok(false);
        }
        crate::modcat::certify_indecomposable(&x)
    }

    /// `δ(F_f) = ker(f ⊗_R -: A ⊗_R - -> B ⊗_R -)` over a commutative algebra.
    pub fn elementary_dual(&self, f: &FpFunctor, t: &TensorStructure) -> Result<FpFunctor> {
        if !self.registry.algebra().is_commutative() || t.kind() != crate::monoidal::TensorKind::Commutative {
            return Err(Error::Usage("elementary duality needs a commutative algebra and ⊗_R".into()));
        }
        let a = f.source();
        let b = f.target();
        let src = self.tensor_functor_module(t, a)?;
        let tgt = self.tensor_functor_module(t, b)?;
        let p = self.gamma.p();
        let blocks = self
            .registry
            .items()
            .iter()
            .map(|e| Ok(t.tensor_mor(f.presentation(), &e.identity())?.matrix().clone()))
            .collect::<Result<Vec<_>>>()?;
        let theta = Matrix::block_diag(p, &blocks);
        debug_assert_eq!(theta.cols(), src.dim());
        debug_assert_eq!(theta.rows(), tgt.dim());
        let (k, _) = src.submodule(&theta.kernel())?;
        Ok(self.from_gamma(&k)?.functor)
    }

    /// `Γ`-module of `M -> C ⊗ M`.
    fn tensor_functor_module(&self, t: &TensorStructure, c: &Module) -> Result<Module> {
        let dims = self
            .registry
            .items()
            .iter()
            .map(|e| Ok(t.tensor_obj(c, e)?.dim()))
            .collect::<Result<Vec<_>>>()?;
        self.module_from_values(&dims, |i, j, phi| {
            let m = ModuleMorphism::new_unchecked(
                self.registry.item(i).clone(),
                self.registry.item(j).clone(),
                phi.clone(),
            );
            Ok(t.tensor_mor(&c.identity(), &m)?.matrix().clone())
        })
    }

    /// Krull-Schmidt decomposition against a functor registry.
    pub fn decompose_functor(&self, f: &FpFunctor, freg: &FunctorRegistry) -> Result<Vec<(usize, usize)>> {
        let x = self.to_gamma(f)?;
        let mut counts = vec![0usize; freg.len()];
        for s in split_indecomposables(&x)? {
            let mut found = false;
            for (k, g) in freg.gamma_modules.iter().enumerate() {
                if indecomposable_iso(&s.module, g)?.is_some() {
                    counts[k] += 1;
                    found = true;
                    break;
                }
            }
            if !found {
                let dims = self.block_dims(&s.module);
                return Err(Error::FunctorRegistryIncomplete { dims });
            }
        }
        Ok(counts.into_iter().enumerate().filter(|&(_, c)| c > 0).collect())
    }

    /// Indecomposable functors appearing as summands of `F_f` for all
    /// `f: A -> B` with `A`, `B` sums of registry items and `dim A + dim B <= dim_bound`.
    pub fn discover_indec_functors(&self, dim_bound: usize, budget: u64) -> Result<Vec<FpFunctor>> {
        let objects = self.objects_up_to(dim_bound);
        let mut morphism_count: u64 = 0;
        for a in objects.iter().map(|o| &o.module) {
            for b in objects.iter().map(|o| &o.module) {
                if a.dim() + b.dim() <= dim_bound && a.dim() > 0 {
                    let h = hom_space(a, b)?;
                    morphism_count = morphism_count.saturating_add(h.cardinality());
                }
            }
        }
        if morphism_count > budget {
            return Err(Error::BudgetExceeded(format!(
                "functor discovery up to total dimension {dim_bound} needs {morphism_count} presentations (budget {budget})"
            )));
        }
        let mut found: Vec<(FpFunctor, Module)> = Vec::new();
        for a in objects.iter().map(|o| &o.module) {
            if a.dim() == 0 {
                continue;
            }
            for b in objects.iter().map(|o| &o.module) {
                if a.dim() + b.dim() > dim_bound {
                    continue;
                }
                let h = hom_space(a, b)?;
                for coeffs in exactla::all_vectors(a.p(), h.dim()) {
                    let f = FpFunctor::new(ModuleMorphism::new_unchecked(a.clone(), b.clone(), h.element(&coeffs)));
                    let x = self.to_gamma(&f)?;
                    if x.is_zero() {
                        continue;
                    }
                    for s in split_indecomposables(&x)? {
                        let mut known = false;
                        for (_, y) in &found {
                            if indecomposable_iso(&s.module, y)?.is_some() {
                                known = true;
                                break;
                            }
                        }
                        if !known {
                            let functor = self.from_gamma(&s.module)?.functor;
                            let y = self.to_gamma(&functor)?;
                            found.push((functor, y));
                        }
                    }
                }
            }
        }
        let mut keyed: Vec<(Vec<usize>, usize, usize, usize, FpFunctor)> = found
            .into_iter()
            .enumerate()
            .map(|(pos, (f, y))| {
                let dims = self.block_dims(&y);
                (dims, f.source().dim(), f.target().dim(), pos, f)
            })
            .collect();
        keyed.sort_by(|x, y| {
            let tx: usize = x.0.iter().sum();
            let ty: usize = y.0.iter().sum();
            tx.cmp(&ty).then_with(|| (&x.0, x.1, x.2, x.3).cmp(&(&y.0, y.1, y.2, y.3)))
        });
        Ok(keyed.into_iter().map(|k| k.4).collect())
    }

    /// All direct sums of registry items of dimension `<= bound`, ordered by
    /// dimension and then by multiplicities.
    pub fn objects_up_to(&self, bound: usize) -> Vec<SumObject> {
        let n = self.registry.len();
        let mut out = Vec::new();
        let mut mult = vec![0usize; n];
        self.collect_objects(0, bound, &mut mult, &mut out);
        out.sort_by(|x, y| x.module.dim().cmp(&y.module.dim()).then_with(|| y.mult.cmp(&x.mult)));
        out
    }

    fn collect_objects(&self, i: usize, left: usize, mult: &mut Vec<usize>, out: &mut Vec<SumObject>) {
        if i == self.registry.len() {
            let pairs: Vec<(usize, usize)> = mult.iter().copied().enumerate().filter(|&(_, k)| k > 0).collect();
            let module = self.registry.module_from_multiplicities(&pairs).expect("same algebra");
            out.push(SumObject { mult: pairs, module });
            return;
        }
        let d = self.registry.item(i).dim();
        let mut k = 0;
        loop {
            mult[i] = k;
            self.collect_objects(i + 1, left - k * d, mult, out);
            if (k + 1) * d > left {
                break;
            }
            k += 1;
        }
        mult[i] = 0;
    }
}

/// A direct sum of registry items with its multiplicities.
#[derive(Clone, Debug)]
pub struct SumObject {
    pub mult: Vec<(usize, usize)>,
    pub module: Module,
}

impl SumObject {
    pub fn label(&self, reg: &IndecRegistry) -> String {
        crate::modcat::format_multiplicities(&self.mult, reg.names())
    }
}

// ---------------------------------------------------------------------------
// Functor registries
// ---------------------------------------------------------------------------

/// Named indecomposable functors with their cached `Γ`-modules.
#[derive(Clone, Debug)]
pub struct FunctorRegistry {
    names: Vec<String>,
    functors: Vec<FpFunctor>,
    gamma_modules: Vec<Module>,
}

impl FunctorRegistry {
    /// Certifies each item as indecomposable and the items as pairwise non-isomorphic.
    pub fn new(ctx: &Auslander, items: Vec<(String, FpFunctor)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut functors = Vec::new();
        let mut gamma_modules: Vec<Module> = Vec::new();
        for (name, f) in items {
            let x = ctx.to_gamma(&f)?;
            if x.is_zero() || !crate::modcat::certify_indecomposable(&x)? {
                return Err(Error::Validation(format!("functor {name} is not indecomposable")));
            }
            for (other, y) in names.iter().zip(&gamma_modules) {
                if indecomposable_iso(&x, y)?.is_some() {
                    return Err(Error::Validation(format!("functors {other} and {name} are isomorphic")));
                }
            }
            names.push(name);
            functors.push(f);
            gamma_modules.push(x);
        }
        Ok(Self { names, functors, gamma_modules })
    }

    pub fn len(&self) -> usize {
        self.functors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functors.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn functors(&self) -> &[FpFunctor] {
        &self.functors
    }

    pub fn functor(&self, i: usize) -> &FpFunctor {
        &self.functors[i]
    }

    pub fn gamma_module(&self, i: usize) -> &Module {
        &self.gamma_modules[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Registry index of an indecomposable `Γ`-module.
    pub fn match_gamma(&self, x: &Module) -> Result<Option<usize>> {
        for (k, y) in self.gamma_modules.iter().enumerate() {
            if indecomposable_iso(x, y)?.is_some() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctorFile {
    pub functors: Vec<FunctorEntry>,
}

/// A presenting morphism between sums of registry items. Module references
/// are `0` or `+`-separated registry names with optional `^k` multiplicities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctorEntry {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<i64>>,
}

/// Resolves a module reference like `R + U^2` against the registry.
pub fn parse_module_ref(reg: &IndecRegistry, text: &str) -> Result<Module> {
    let text = text.trim();
    if text == "0" || text.is_empty() {
        return Ok(Module::zero(reg.algebra().clone()));
    }
    let mut parts = Vec::new();
    for term in text.split('+') {
        let term = term.trim();
        let (name, k) = match term.rsplit_once('^') {
            Some((n, k)) => (
                n.trim(),
                k.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?,
            ),
            None => (term, 1),
        };
        let idx = reg
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown registry module {name:?}")))?;
        for _ in 0..k {
            parts.push(reg.item(idx).clone());
        }
    }
    Ok(direct_sum(reg.algebra(), &parts)?.module)
}

impl FunctorFile {
    pub fn into_functors(&self, reg: &IndecRegistry) -> Result<Vec<(String, FpFunctor)>> {
        self.functors
            .iter()
            .map(|e| {
                let a = parse_module_ref(reg, &e.source)?;
                let b = parse_module_ref(reg, &e.target)?;
                let m = if b.dim() == 0 || a.dim() == 0 {
                    Matrix::zeros(reg.algebra().p(), b.dim(), a.dim())
                } else {
                    Matrix::from_rows(reg.algebra().p(), a.dim(), &e.matrix)?
                };
                let f = ModuleMorphism::new(a, b, m)
                    .map_err(|err| Error::Validation(format!("functor {}: {err}", e.name)))?;
                Ok((e.name.clone(), FpFunctor::new(f)))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_truncated_poly;

    struct Ex {
        t: TensorStructure,
        ctx: Auslander,
        r: Module,
        u: Module,
        pmap: ModuleMorphism,
        jmap: ModuleMorphism,
    }

    fn ex51() -> Ex {
        let a = Arc::new(build_truncated_poly(2, 2).unwrap());
        let r = Module::regular(a.clone());
        let u = Module::new(a.clone(), vec![Matrix::identity(2, 1), Matrix::zeros(2, 1, 1)]).unwrap();
        let pmap = ModuleMorphism::new(r.clone(), u.clone(), Matrix::from_rows(2, 2, &[vec![1, 0]]).unwrap()).unwrap();
        let jmap =
            ModuleMorphism::new(u.clone(), r.clone(), Matrix::from_rows(2, 1, &[vec![0], vec![1]]).unwrap()).unwrap();
        let reg = IndecRegistry::new(a.clone(), vec![("R".into(), r.clone()), ("U".into(), u.clone())], Some(2))
            .unwrap();
        Ex { t: TensorStructure::commutative(a).unwrap(), ctx: Auslander::new(reg).unwrap(), r, u, pmap, jmap }
    }

    fn dims(ctx: &Auslander, f: &FpFunctor) -> Vec<usize> {
        ctx.registry().items().iter().map(|m| evaluate(f, m).unwrap().dim()).collect()
    }

    #[test]
    fn evaluations() {
        let e = ex51();
        let s = FpFunctor::new(e.pmap.clone());
        let t = FpFunctor::new(e.jmap.clone());
        // registry order is U, R
        assert_eq!(dims(&e.ctx, &s), vec![0, 1]);
        assert_eq!(dims(&e.ctx, &t), vec![1, 0]);
        assert_eq!(dims(&e.ctx, &FpFunctor::yoneda(&e.r)), vec![1, 2]);
        assert_eq!(dims(&e.ctx, &FpFunctor::yoneda(&e.u)), vec![1, 1]);
        assert_eq!(e.ctx.gamma().dim(), 5);
    }

    #[test]
    fn nat_hom_dims() {
        let e = ex51();
        let s = FpFunctor::new(e.pmap.clone());
        let t = FpFunctor::new(e.jmap.clone());
        assert_eq!(nat_hom(&s, &s).unwrap().len(), 1);
        assert_eq!(nat_hom(&s, &t).unwrap().len(), 0);
        assert_eq!(nat_hom(&FpFunctor::yoneda(&e.r), &t).unwrap().len(), 0);
        assert_eq!(nat_hom(&FpFunctor::yoneda(&e.u), &t).unwrap().len(), 1);
    }

    #[test]
    fn day_tensor_examples() {
        let e = ex51();
        let s = FpFunctor::new(e.pmap.clone());
        let t = FpFunctor::new(e.jmap.clone());
        let st = day_tensor(&s, &t, &e.t).unwrap();
        assert!(e.ctx.to_gamma(&st).unwrap().is_zero());
        let tt = day_tensor(&t, &t, &e.t).unwrap();
        assert!(e.ctx.functor_iso(&tt, &FpFunctor::yoneda(&e.u)).unwrap());
    }

    #[test]
    fn round_trip_and_pdim() {
        let e = ex51();
        let s = FpFunctor::new(e.pmap.clone());
        let t = FpFunctor::new(e.jmap.clone());
        for f in [&s, &t, &FpFunctor::yoneda(&e.r)] {
            let back = e.ctx.from_gamma(&e.ctx.to_gamma(f).unwrap()).unwrap().functor;
            assert!(e.ctx.functor_iso(f, &back).unwrap());
        }
        assert_eq!(e.ctx.pdim(&FpFunctor::yoneda(&e.u)).unwrap(), 0);
        assert_eq!(e.ctx.pdim(&s).unwrap(), 1);
        assert_eq!(e.ctx.pdim(&t).unwrap(), 2);
    }

    #[test]
    fn kernel_and_cokernel() {
        let e = ex51();
        // (p,-): (U,-) -> (R,-) has lift p: R -> U
        let yu = FpFunctor::yoneda(&e.u);
        let yr = FpFunctor::yoneda(&e.r);
        let alpha = NatTransf::new(yu.clone(), yr.clone(), e.pmap.matrix().clone()).unwrap();
        let (c, _) = nat_cokernel(&alpha).unwrap();
        assert!(e.ctx.functor_iso(&c, &FpFunctor::new(e.pmap.clone())).unwrap());
        // (j,-): (R,-) -> (U,-) with lift j: U -> R
        let beta = NatTransf::new(yr.clone(), yu.clone(), e.jmap.matrix().clone()).unwrap();
        let (k, incl) = e.ctx.nat_kernel(&beta).unwrap();
        assert!(e.ctx.functor_iso(&k, &yu).unwrap());
        for m in e.ctx.registry().items() {
            assert!(beta.at(m).unwrap().mul(&incl.at(m).unwrap()).is_zero());
            assert_eq!(incl.at(m).unwrap().rank(), evaluate(&k, m).unwrap().dim());
        }
    }

    #[test]
    fn discovery_finds_five() {
        let e = ex51();
        let found = e.ctx.discover_indec_functors(4, 1 << 20).unwrap();
        assert_eq!(found.len(), 5);
        let d: Vec<Vec<usize>> = found.iter().map(|f| dims(&e.ctx, f)).collect();
        assert_eq!(d, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 1], vec![1, 2]]);
        assert!(e.ctx.discover_indec_functors(0, 1).unwrap().is_empty());
    }

    #[test]
    fn elementary_duality_swaps_u_and_w() {
        let e = ex51();
        let yu = FpFunctor::yoneda(&e.u);
        let d = e.ctx.elementary_dual(&yu, &e.t).unwrap();
        let eps = ModuleMorphism::new(e.r.clone(), e.r.clone(), e.r.action()[1].clone()).unwrap();
        let w = FpFunctor::new(eps);
        assert!(e.ctx.functor_iso(&d, &w).unwrap());
        let dd = e.ctx.elementary_dual(&d, &e.t).unwrap();
        assert!(e.ctx.functor_iso(&dd, &yu).unwrap());
    }
}
