//! Finite-dimensional modules over an [`Algebra`], their morphisms, and the
//! Krull-Schmidt machinery.
//!
//! A module is a tuple of action matrices, one per algebra basis element.
//! Morphisms are intertwining matrices; `Hom(M, N)` is the solution space of
//! `X A_M(b) = A_N(b) X` over the algebra generators.
//!
//! Indecomposability is decided by a locality test on `End(M)`: for each basis
//! endomorphism `x`, iterating `x -> x^p` becomes periodic, and the element of
//! the cycle congruent to `x` modulo the radical is its Teichmüller lift `T(x)`.
//! When `End(M)` is local, the `x - T(x)` span the radical `J`; the test then
//! checks that this span is a nilpotent ideal whose quotient is a field. Any
//! failure proves `End(M)` is not local. Splitting uses Fitting's lemma: an
//! endomorphism `a` that is neither nilpotent nor invertible gives
//! `M = ker(a^n) ⊕ im(a^n)`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactla::{self, combine_matrices, field_power, Eliminator, Matrix, Quotient, Subspace};

/// Exhaustive scans of an endomorphism algebra are used up to this size.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;

static SEARCH_SEED: AtomicU64 = AtomicU64::new(0x5eed);

/// Seed for randomized splitting-element search.
pub fn set_search_seed(seed: u64) {
    SEARCH_SEED.store(seed, Ordering::Relaxed);
}

pub fn search_seed() -> u64 {
    SEARCH_SEED.load(Ordering::Relaxed)
}

#[derive(Clone, Debug)]
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.dim == other.dim && self.action == other.action
    }
}

impl Eq for Module {}

pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Module {
    /// Validating constructor.
    pub fn new(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<Self> {
        let m = Self::from_action_unchecked(algebra, action)?;
        m.check_axioms()?;
        Ok(m)
    }

    /// Builds a module without checking the structure-constant relations.
    pub fn from_action_unchecked(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::Validation(format!(
                "module has {} action matrices, algebra has dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let dim = action.first().map_or(0, |m| m.rows());
        for m in &action {
            if m.rows() != dim || m.cols() != dim || m.p() != algebra.p() {
                return Err(Error::Validation("action matrices must be square of equal size over F_p".into()));
            }
        }
        Ok(Self { algebra, dim, action })
    }

    pub fn check_axioms(&self) -> Result<()> {
        let a = &self.algebra;
        let p = a.p();
        let n = self.dim;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = combine_matrices(p, n, n, a.structure_constant(i, j), &self.action);
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "action does not respect the product of basis elements {i} and {j}"
                    )));
                }
            }
        }
        if !self.act(a.unit()).is_identity() {
            return Err(Error::Validation("unit does not act as the identity".into()));
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let p = algebra.p();
        let action = vec![Matrix::zeros(p, 0, 0); algebra.dim()];
        Self { algebra, dim: 0, action }
    }

    /// The regular left module `A`.
    pub fn regular(algebra: Arc<Algebra>) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult(i)).collect();
        let dim = algebra.dim();
        Self { algebra, dim, action }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn p(&self) -> u8 {
        self.algebra.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, element: &[u8]) -> Matrix {
        combine_matrices(self.p(), self.dim, self.dim, element, &self.action)
    }

    pub fn identity(&self) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(self.clone(), self.clone(), Matrix::identity(self.p(), self.dim))
    }

    /// Conjugates the action by `change` (columns = new basis in old coordinates).
    pub fn change_basis(&self, change: &Matrix) -> Result<(Module, ModuleMorphism)> {
        let inv = change
            .inverse()
            .ok_or_else(|| Error::Usage("basis change must be invertible".into()))?;
        let action = self.action.iter().map(|m| inv.mul(m).mul(change)).collect();
        let new = Module { algebra: self.algebra.clone(), dim: self.dim, action };
        let iso = ModuleMorphism::new_unchecked(new.clone(), self.clone(), change.clone());
        Ok((new, iso))
    }

    /// Submodule spanned by an invariant subspace, with its inclusion.
    pub fn submodule(&self, sub: &Subspace) -> Result<(Module, ModuleMorphism)> {
        let p = self.p();
        let k = sub.dim();
        let incl = Matrix::from_columns(p, self.dim, sub.basis());
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let mut m = Matrix::zeros(p, k, k);
            for (c, v) in sub.basis().iter().enumerate() {
                let image = a.mul_vec(v);
                let coords = sub
                    .coordinates(&image)
                    .ok_or_else(|| Error::Usage("subspace is not a submodule".into()))?;
                for (r, x) in coords.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            action.push(m);
        }
        let module = Module { algebra: self.algebra.clone(), dim: k, action };
        let inclusion = ModuleMorphism::new_unchecked(module.clone(), self.clone(), incl);
        Ok((module, inclusion))
    }

    /// Quotient by an invariant subspace, with the projection.
    pub fn quotient(&self, sub: &Subspace) -> Result<(Module, ModuleMorphism)> {
        let q = Quotient::new(sub.clone());
        for a in &self.action {
            if !sub.image_under(a).basis().iter().all(|v| sub.contains_vector(v)) {
                return Err(Error::Usage("subspace is not a submodule".into()));
            }
        }
        let action = self.action.iter().map(|a| q.induced(&q, a)).collect();
        let module = Module { algebra: self.algebra.clone(), dim: q.dim(), action };
        let proj = ModuleMorphism::new_unchecked(self.clone(), module.clone(), q.projection_matrix());
        Ok((module, proj))
    }

    /// Smallest submodule containing the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<u8>]) -> Subspace {
        let mut e = Eliminator::new(self.p(), self.dim);
        let mut queue: Vec<Vec<u8>> = vectors.to_vec();
        let mut kept = Vec::new();
        while let Some(v) = queue.pop() {
            let r = e.reduce(v.clone());
            if r.iter().all(|&x| x == 0) {
                continue;
            }
            e.push(v.clone());
            kept.push(v.clone());
            for &g in self.algebra.generators() {
                queue.push(self.action[g].mul_vec(&v));
            }
        }
        e.into_subspace()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    source: Module,
    target: Module,
    matrix: Matrix,
}

impl ModuleMorphism {
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Result<Self> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::Usage("morphism between modules over different algebras".into()));
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Usage(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        for (a, b) in source.action().iter().zip(target.action()) {
            if matrix.mul(a) != b.mul(&matrix) {
                return Err(Error::Validation("matrix does not intertwine the actions".into()));
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.dim());
        debug_assert_eq!(matrix.cols(), source.dim());
        Self { source, target, matrix }
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let m = Matrix::zeros(source.p(), target.dim(), source.dim());
        Self::new_unchecked(source.clone(), target.clone(), m)
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMorphism) -> Result<ModuleMorphism> {
        if first.target.dim() != self.source.dim() {
            return Err(Error::Usage("composition of non-composable morphisms".into()));
        }
        Ok(Self::new_unchecked(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix)))
    }

    pub fn add(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.source.dim() != other.source.dim() || self.target.dim() != other.target.dim() {
            return Err(Error::Usage("sum of morphisms with different shapes".into()));
        }
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn scale(&self, c: u8) -> ModuleMorphism {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// A basis of `Hom(M, N)` in canonical (reduced echelon) form, with
/// coordinate extraction.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    space: Subspace,
    basis: Vec<Matrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn morphisms(&self) -> Vec<ModuleMorphism> {
        self.basis
            .iter()
            .map(|m| ModuleMorphism::new_unchecked(self.source.clone(), self.target.clone(), m.clone()))
            .collect()
    }

    pub fn morphism(&self, i: usize) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(self.source.clone(), self.target.clone(), self.basis[i].clone())
    }

    /// Coordinates of a module map in this basis (`None` if not a module map).
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<u8>> {
        self.space.coordinates(m.data())
    }

    pub fn element(&self, coords: &[u8]) -> Matrix {
        combine_matrices(self.source.p(), self.target.dim(), self.source.dim(), coords, &self.basis)
    }

    /// The Hom-space as a subspace of row-major `dim N × dim M` matrices.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn cardinality(&self) -> u64 {
        field_power(self.source.p(), self.dim())
    }
}

fn check_same_algebra(m: &Module, n: &Module) -> Result<()> {
    if same_algebra(m.algebra(), n.algebra()) {
        Ok(())
    } else {
        Err(Error::Usage("modules over different algebras".into()))
    }
}

/// Basis of `Hom(M, N)`.
pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace> {
    check_same_algebra(m, n)?;
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    let width = dm * dn;
    let mut e = Eliminator::new(p, width);
    // unknown X (dn x dm), variable index r * dm + c
    'outer: for &g in m.algebra().generators() {
        let am = &m.action()[g];
        let an = &n.action()[g];
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0u8; width];
                // (X am)[r][c] = sum_k X[r][k] am[k][c]
                for k in 0..dm {
                    let v = am.get(k, c);
                    if v != 0 {
                        row[r * dm + k] = exactla::add(p, row[r * dm + k], v);
                    }
                }
                // - (an X)[r][c] = - sum_k an[r][k] X[k][c]
                for k in 0..dn {
                    let v = an.get(r, k);
                    if v != 0 {
                        row[k * dm + c] = exactla::sub(p, row[k * dm + c], v);
                    }
                }
                e.push(row);
                if e.is_full() {
                    break 'outer;
                }
            }
        }
    }
    let space = Subspace::from_spanning(p, width, &e.nullspace());
    let basis = space.basis().iter().map(|v| Matrix::from_data(p, dn, dm, v.clone())).collect();
    Ok(HomSpace { source: m.clone(), target: n.clone(), space, basis })
}

pub fn mor_kernel(f: &ModuleMorphism) -> Result<(Module, ModuleMorphism)> {
    f.source.submodule(&f.matrix.kernel())
}

pub fn mor_cokernel(f: &ModuleMorphism) -> Result<(Module, ModuleMorphism)> {
    f.target.quotient(&f.matrix.column_space())
}

pub fn mor_image(f: &ModuleMorphism) -> Result<(Module, ModuleMorphism)> {
    f.target.submodule(&f.matrix.column_space())
}

/// Direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleMorphism>,
    pub projections: Vec<ModuleMorphism>,
}

pub fn direct_sum(algebra: &Arc<Algebra>, ms: &[Module]) -> Result<DirectSum> {
    for m in ms {
        if !same_algebra(algebra, m.algebra()) {
            return Err(Error::Usage("direct sum of modules over different algebras".into()));
        }
    }
    let p = algebra.p();
    let action = (0..algebra.dim())
        .map(|b| {
            let blocks: Vec<Matrix> = ms.iter().map(|m| m.action()[b].clone()).collect();
            Matrix::block_diag(p, &blocks)
        })
        .collect();
    let total: usize = ms.iter().map(|m| m.dim()).sum();
    let module = Module { algebra: algebra.clone(), dim: total, action };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for m in ms {
        let mut inj = Matrix::zeros(p, total, m.dim());
        inj.write_block(off, 0, &Matrix::identity(p, m.dim()));
        projections.push(ModuleMorphism::new_unchecked(module.clone(), m.clone(), inj.transpose()));
        injections.push(ModuleMorphism::new_unchecked(m.clone(), module.clone(), inj));
        off += m.dim();
    }
    Ok(DirectSum { module, injections, projections })
}

/// Block matrix morphism `⊕ sources -> ⊕ targets`; `blocks[t][s]` maps source `s` to target `t`.
pub fn block_morphism(
    algebra: &Arc<Algebra>,
    sources: &[Module],
    targets: &[Module],
    blocks: &[Vec<Matrix>],
) -> Result<ModuleMorphism> {
    let src = direct_sum(algebra, sources)?.module;
    let tgt = direct_sum(algebra, targets)?.module;
    let mut m = Matrix::zeros(algebra.p(), tgt.dim(), src.dim());
    let mut r0 = 0;
    for (t, row) in targets.iter().zip(blocks) {
        let mut c0 = 0;
        for (s, b) in sources.iter().zip(row) {
            m.write_block(r0, c0, b);
            c0 += s.dim();
        }
        r0 += t.dim();
    }
    ModuleMorphism::new(src, tgt, m)
}

/// `f | k`: whether `k = k' ∘ f` for some module map `k'`.
pub fn divides(f: &ModuleMorphism, k: &ModuleMorphism) -> Result<bool> {
    if f.source.dim() != k.source.dim() || !same_algebra(f.source.algebra(), k.source.algebra()) {
        return Err(Error::Usage("divides: f and k must share a source".into()));
    }
    let hom = hom_space(&f.target, &k.target)?;
    let cols: Vec<Vec<u8>> = hom.basis().iter().map(|h| h.mul(&f.matrix).to_vec()).collect();
    let rows = k.matrix.rows() * k.matrix.cols();
    let sys = Matrix::from_columns(f.source.p(), rows, &cols);
    Ok(sys.solve(k.matrix.data())?.is_some())
}

// ---------------------------------------------------------------------------
// Endomorphism algebras: locality and splitting
// ---------------------------------------------------------------------------

/// Outcome of the locality test on an endomorphism algebra.
#[derive(Clone, Debug)]
pub enum Locality {
    /// Local, with a basis of its radical (as matrices).
    Local { radical: Vec<Matrix> },
    /// Not local; carries an element that is neither nilpotent nor invertible when one was found.
    NotLocal { witness: Option<Matrix> },
}

fn teichmuller(x: &Matrix, p: u8) -> Matrix {
    // iterate y -> y^p until periodic, then pick the cycle element at an index
    // divisible by the period.
    let mut seen: HashMap<Matrix, usize> = HashMap::new();
    let mut seq = vec![x.clone()];
    seen.insert(x.clone(), 0);
    loop {
        let next = seq.last().unwrap().pow(p as u64);
        if let Some(&start) = seen.get(&next) {
            let period = seq.len() - start;
            let s = start.div_ceil(period) * period;
            return seq[s].clone();
        }
        seen.insert(next.clone(), seq.len());
        seq.push(next);
    }
}

fn is_fitting_splitter(a: &Matrix) -> bool {
    !a.is_nilpotent() && !a.is_invertible()
}

/// Decides whether the algebra spanned by `basis` (square matrices closed under
/// products, containing the identity) is local.
pub fn locality(basis: &[Matrix]) -> Locality {
    let Some(first) = basis.first() else {
        return Locality::NotLocal { witness: None };
    };
    let p = first.p();
    let n = first.rows();
    let width = n * n;
    let algebra_space = Subspace::from_spanning(p, width, &basis.iter().map(|m| m.to_vec()).collect::<Vec<_>>());
    let to_mat = |v: &[u8]| Matrix::from_data(p, n, n, v.to_vec());

    let mut radical_vecs = Vec::new();
    for b in basis {
        let t = teichmuller(b, p);
        radical_vecs.push(b.sub(&t).to_vec());
    }
    let radical = Subspace::from_spanning(p, width, &radical_vecs);

    // two-sided ideal
    for r in radical.basis() {
        let rm = to_mat(r);
        for b in basis {
            for prod in [b.mul(&rm), rm.mul(b)] {
                if !radical.contains_vector(prod.data()) {
                    return Locality::NotLocal { witness: find_witness_among(&[prod]) };
                }
            }
        }
    }
    // nilpotent ideal
    let mut power = radical.clone();
    let mut steps = 0;
    while !power.is_zero() {
        steps += 1;
        if steps > n + 1 {
            let w: Vec<Matrix> = radical.basis().iter().map(|v| to_mat(v)).collect();
            return Locality::NotLocal { witness: find_witness_among(&w) };
        }
        let mut prods = Vec::new();
        for a in power.basis() {
            for b in radical.basis() {
                prods.push(to_mat(a).mul(&to_mat(b)).to_vec());
            }
        }
        power = Subspace::from_spanning(p, width, &prods);
    }
    // quotient must be commutative
    let quotient_basis = radical.complement_in(&algebra_space);
    for (i, a) in quotient_basis.iter().enumerate() {
        for b in &quotient_basis[i + 1..] {
            let (am, bm) = (to_mat(a), to_mat(b));
            let comm = am.mul(&bm).sub(&bm.mul(&am));
            if !radical.contains_vector(comm.data()) {
                return Locality::NotLocal { witness: None };
            }
        }
    }
    // commutative reduced quotient: it is a field iff the Frobenius-fixed
    // subspace is one-dimensional
    let k = quotient_basis.len();
    let q = Quotient::new(radical.clone());
    let images: Vec<Vec<u8>> = quotient_basis.iter().map(|v| q.project(v)).collect();
    let image_matrix = Matrix::from_columns(p, q.dim(), &images);
    let mut frob_minus_id = Vec::with_capacity(k);
    for v in &quotient_basis {
        let m = to_mat(v);
        let f = m.pow(p as u64).sub(&m);
        match image_matrix.solve(&q.project(f.data())) {
            Ok(Some(c)) => frob_minus_id.push(c),
            _ => return Locality::NotLocal { witness: None },
        }
    }
    let fm = Matrix::from_columns(p, k, &frob_minus_id);
    let fixed = fm.nullspace();
    if fixed.len() == 1 {
        let radical = radical.basis().iter().map(|v| to_mat(v)).collect();
        return Locality::Local { radical };
    }
    // nontrivial idempotent in the quotient: shift by scalars to hit a splitter
    let mut witness = None;
    'search: for coeffs in &fixed {
        let x = combine_matrices(p, n, n, coeffs, &quotient_basis.iter().map(|v| to_mat(v)).collect::<Vec<_>>());
        for c in 0..p {
            let y = x.sub(&Matrix::scalar(p, n, c));
            if is_fitting_splitter(&y) {
                witness = Some(y);
                break 'search;
            }
        }
    }
    Locality::NotLocal { witness }
}

fn find_witness_among(cands: &[Matrix]) -> Option<Matrix> {
    cands.iter().find(|m| is_fitting_splitter(m)).cloned()
}

/// Finds an endomorphism that is neither nilpotent nor invertible, or proves
/// there is none (`Ok(None)` means `End` is local).
pub fn splitting_endomorphism(basis: &[Matrix]) -> Result<Option<Matrix>> {
    match locality(basis) {
        Locality::Local { .. } => Ok(None),
        Locality::NotLocal { witness: Some(w) } => Ok(Some(w)),
        Locality::NotLocal { witness: None } => {
            let p = basis[0].p();
            let n = basis[0].rows();
            if let Some(w) = find_witness_among(basis) {
                return Ok(Some(w));
            }
            let d = basis.len();
            if field_power(p, d) <= EXHAUSTIVE_LIMIT {
                for coeffs in exactla::all_vectors(p, d) {
                    let x = combine_matrices(p, n, n, &coeffs, basis);
                    if is_fitting_splitter(&x) {
                        return Ok(Some(x));
                    }
                }
                return Ok(None);
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(search_seed() ^ ((n as u64) << 32) ^ d as u64);
                for _ in 0..200_000 {
                    let coeffs: Vec<u8> = (0..d).map(|_| rng.gen_range(0..p)).collect();
                    let x = combine_matrices(p, n, n, &coeffs, basis);
                    if is_fitting_splitter(&x) {
                        return Ok(Some(x));
                    }
                }
            }
            Err(Error::BudgetExceeded(format!(
                "no splitting endomorphism found in a non-local endomorphism algebra of dimension {d}"
            )))
        }
    }
}

/// Whether `End(M)` is local, i.e. `M` is indecomposable. The zero module is rejected.
pub fn certify_indecomposable(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Err(Error::Usage("the zero module is not indecomposable".into()));
    }
    let end = hom_space(m, m)?;
    Ok(splitting_endomorphism(end.basis())?.is_none())
}

/// Radical of a local endomorphism algebra.
pub fn local_radical(m: &Module) -> Result<Vec<Matrix>> {
    let end = hom_space(m, m)?;
    match locality(end.basis()) {
        Locality::Local { radical } => Ok(radical),
        Locality::NotLocal { .. } => Err(Error::Validation("module is not indecomposable".into())),
    }
}

/// An indecomposable direct summand of a module.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    /// `M.dim × k` inclusion.
    pub inclusion: Matrix,
    /// `k × M.dim` projection; projections and inclusions are biorthogonal.
    pub projection: Matrix,
}

/// Splits a module into indecomposable summands.
pub fn split_indecomposables(m: &Module) -> Result<Vec<Summand>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let p = m.p();
    let mut pieces: Vec<Subspace> = Vec::new();
    let mut stack = vec![Subspace::full(p, m.dim())];
    while let Some(space) = stack.pop() {
        let (sub, incl) = m.submodule(&space)?;
        let end = hom_space(&sub, &sub)?;
        match splitting_endomorphism(end.basis())? {
            None => pieces.push(space),
            Some(a) => {
                let an = a.pow(sub.dim() as u64);
                let to_ambient = |s: Subspace| s.image_under(incl.matrix());
                stack.push(to_ambient(an.column_space()));
                stack.push(to_ambient(an.kernel()));
            }
        }
    }
    // canonical order of pieces: by dimension, then echelon basis
    pieces.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.basis().cmp(b.basis())));
    let cols: Vec<Vec<u8>> = pieces.iter().flat_map(|s| s.basis().to_vec()).collect();
    let change = Matrix::from_columns(p, m.dim(), &cols);
    let inv = change
        .inverse()
        .ok_or_else(|| Error::Validation("summands do not form a direct sum".into()))?;
    let mut out = Vec::new();
    let mut off = 0;
    for s in pieces {
        let (module, incl) = m.submodule(&s)?;
        let k = s.dim();
        out.push(Summand { module, inclusion: incl.matrix().clone(), projection: inv.block(off, 0, k, m.dim()) });
        off += k;
    }
    Ok(out)
}

/// Isomorphism test for indecomposable modules: with `End(M)` local, an
/// isomorphism exists iff some composite `g_j ∘ f_i` of Hom basis elements is
/// invertible.
pub fn indecomposable_iso(m: &Module, n: &Module) -> Result<Option<Matrix>> {
    check_same_algebra(m, n)?;
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let hmn = hom_space(m, n)?;
    if hmn.dim() == 0 {
        return Ok(None);
    }
    if let Some(f) = hmn.basis().iter().find(|f| f.is_invertible()) {
        return Ok(Some(f.clone()));
    }
    let hnm = hom_space(n, m)?;
    for f in hmn.basis() {
        for g in hnm.basis() {
            if g.mul(f).is_invertible() {
                return Ok(Some(f.clone()));
            }
        }
    }
    Ok(None)
}

/// Isomorphism test with witness `M -> N`.
pub fn is_isomorphic(m: &Module, n: &Module) -> Result<Option<ModuleMorphism>> {
    check_same_algebra(m, n)?;
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(ModuleMorphism::zero(m, n)));
    }
    let hmn = hom_space(m, n)?;
    if let Some(f) = hmn.basis().iter().find(|f| f.is_invertible()) {
        return Ok(Some(ModuleMorphism::new_unchecked(m.clone(), n.clone(), f.clone())));
    }
    if hmn.dim() == 0 || hom_space(n, m)?.dim() != hmn.dim() || hom_space(m, m)?.dim() != hmn.dim() {
        return Ok(None);
    }
    let sm = split_indecomposables(m)?;
    let sn = split_indecomposables(n)?;
    if sm.len() != sn.len() {
        return Ok(None);
    }
    let p = m.p();
    let mut used = vec![false; sn.len()];
    let mut witness = Matrix::zeros(p, n.dim(), m.dim());
    for a in &sm {
        let mut found = false;
        for (j, b) in sn.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(iso) = indecomposable_iso(&a.module, &b.module)? {
                used[j] = true;
                witness = witness.add(&b.inclusion.mul(&iso).mul(&a.projection));
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    Ok(Some(ModuleMorphism::new_unchecked(m.clone(), n.clone(), witness)))
}

// ---------------------------------------------------------------------------
// Registry of indecomposables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct IndecRegistry {
    algebra: Arc<Algebra>,
    names: Vec<String>,
    items: Vec<Module>,
    complete_up_to: Option<usize>,
}

impl IndecRegistry {
    /// Certifies each item and orders them by dimension, then insertion.
    pub fn new(algebra: Arc<Algebra>, items: Vec<(String, Module)>, complete_up_to: Option<usize>) -> Result<Self> {
        let mut items: Vec<(usize, String, Module)> =
            items.into_iter().enumerate().map(|(i, (n, m))| (i, n, m)).collect();
        for (_, name, m) in &items {
            if !same_algebra(&algebra, m.algebra()) {
                return Err(Error::Validation(format!("registry item {name} is over a different algebra")));
            }
            m.check_axioms().map_err(|e| Error::Validation(format!("registry item {name}: {e}")))?;
            if m.is_zero() || !certify_indecomposable(m)? {
                return Err(Error::Validation(format!("registry item {name} is not indecomposable")));
            }
        }
        for i in 0..items.len() {
            for j in 0..i {
                if indecomposable_iso(&items[i].2, &items[j].2)?.is_some() {
                    return Err(Error::Validation(format!(
                        "registry items {} and {} are isomorphic",
                        items[j].1, items[i].1
                    )));
                }
            }
        }
        items.sort_by_key(|(i, _, m)| (m.dim(), *i));
        let (names, items) = items.into_iter().map(|(_, n, m)| (n, m)).unzip();
        Ok(Self { algebra, names, items, complete_up_to })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Module] {
        &self.items
    }

    pub fn item(&self, i: usize) -> &Module {
        &self.items[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn complete_up_to(&self) -> Option<usize> {
        self.complete_up_to
    }

    /// Index of the registry item isomorphic to an indecomposable module.
    pub fn match_indecomposable(&self, m: &Module) -> Result<Option<usize>> {
        for (i, e) in self.items.iter().enumerate() {
            if indecomposable_iso(m, e)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `⊕ E_i^{m_i}` for a multiplicity list.
    pub fn module_from_multiplicities(&self, mult: &[(usize, usize)]) -> Result<Module> {
        let ms: Vec<Module> = mult
            .iter()
            .flat_map(|&(i, k)| std::iter::repeat_n(self.items[i].clone(), k))
            .collect();
        Ok(direct_sum(&self.algebra, &ms)?.module)
    }
}

/// Krull-Schmidt multiplicities `(registry index, multiplicity)`, sorted by index.
pub fn decompose(m: &Module, reg: &IndecRegistry) -> Result<Vec<(usize, usize)>> {
    check_same_algebra(m, &Module::zero(reg.algebra.clone()))?;
    let mut counts = vec![0usize; reg.len()];
    for s in split_indecomposables(m)? {
        match reg.match_indecomposable(&s.module)? {
            Some(i) => counts[i] += 1,
            None => return Err(Error::RegistryIncomplete { summand: Box::new(s.module) }),
        }
    }
    Ok(counts.into_iter().enumerate().filter(|&(_, c)| c > 0).collect())
}

/// Renders a multiplicity list like `R + U^2`, or `0` when empty.
pub fn format_multiplicities(mult: &[(usize, usize)], names: &[String]) -> String {
    if mult.is_empty() {
        return "0".into();
    }
    mult.iter()
        .map(|&(i, k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
        .collect::<Vec<_>>()
        .join(" + ")
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All modules of dimension `<= dim_bound` up to isomorphism, by enumerating
/// action matrices on a generating set of the algebra. `budget` caps the
/// number of candidate tuples examined.
pub fn enumerate_modules(a: &Arc<Algebra>, dim_bound: usize, budget: u64) -> Result<Vec<Module>> {
    let p = a.p();
    let words = a.generating_words();
    let g = words.generators.len();
    let mut total: u64 = 0;
    for d in 1..=dim_bound {
        total = total.saturating_add(field_power(p, d * d * g));
    }
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "enumerating modules up to dimension {dim_bound} needs {total} candidates (budget {budget})"
        )));
    }
    let mut found: Vec<Module> = vec![Module::zero(a.clone())];
    for d in 1..=dim_bound {
        let mut by_fingerprint: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for coeffs in exactla::all_vectors(p, d * d * g) {
            let gens: Vec<Matrix> = (0..g)
                .map(|k| Matrix::from_data(p, d, d, coeffs[k * d * d..(k + 1) * d * d].to_vec()))
                .collect();
            let word_mats: Vec<Matrix> = words
                .words
                .iter()
                .map(|w| {
                    w.iter().rev().fold(Matrix::identity(p, d), |acc, &gi| {
                        let pos = words.generators.iter().position(|&x| x == gi).expect("generator");
                        gens[pos].mul(&acc)
                    })
                })
                .collect();
            let action: Vec<Matrix> =
                words.expressions.iter().map(|e| combine_matrices(p, d, d, e, &word_mats)).collect();
            let Ok(m) = Module::new(a.clone(), action) else {
                continue;
            };
            let mut fp: Vec<usize> = m.action().iter().map(|x| x.rank()).collect();
            fp.push(hom_space(&m, &m)?.dim());
            let bucket = by_fingerprint.entry(fp).or_default();
            let mut dup = false;
            for &idx in bucket.iter() {
                if is_isomorphic(&m, &found[idx])?.is_some() {
                    dup = true;
                    break;
                }
            }
            if !dup {
                bucket.push(found.len());
                found.push(m);
            }
        }
    }
    Ok(found)
}

/// Registry of all indecomposables up to `dim_bound`, found by enumeration.
pub fn auto_registry(a: &Arc<Algebra>, dim_bound: usize, budget: u64) -> Result<IndecRegistry> {
    let mut items = Vec::new();
    for m in enumerate_modules(a, dim_bound, budget)? {
        if !m.is_zero() && certify_indecomposable(&m)? {
            let k = items.iter().filter(|(_, x): &&(String, Module)| x.dim() == m.dim()).count();
            items.push((format!("M{}_{}", m.dim(), k + 1), m));
        }
    }
    IndecRegistry::new(a.clone(), items, Some(dim_bound))
}

// ---------------------------------------------------------------------------
// Registry files
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegistryFile {
    pub modules: Vec<ModuleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_up_to_dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleEntry {
    pub name: String,
    pub dim: usize,
    /// One `dim × dim` matrix (as rows) per algebra basis element.
    pub action: Vec<Vec<Vec<i64>>>,
}

impl ModuleEntry {
    pub fn into_module(&self, a: &Arc<Algebra>) -> Result<Module> {
        let action = self
            .action
            .iter()
            .map(|rows| {
                if rows.len() != self.dim {
                    return Err(Error::Validation(format!("module {}: action matrix has wrong size", self.name)));
                }
                Matrix::from_rows(a.p(), self.dim, rows)
            })
            .collect::<Result<Vec<_>>>()?;
        if action.len() != a.dim() {
            return Err(Error::Validation(format!(
                "module {}: {} action matrices for an algebra of dimension {}",
                self.name,
                action.len(),
                a.dim()
            )));
        }
        if self.dim == 0 {
            return Ok(Module::zero(a.clone()));
        }
        Module::new(a.clone(), action)
    }

    pub fn from_module(name: &str, m: &Module) -> Self {
        Self { name: name.to_string(), dim: m.dim(), action: m.action().iter().map(|x| x.to_int_rows()).collect() }
    }
}

impl RegistryFile {
    pub fn into_registry(self, a: &Arc<Algebra>) -> Result<IndecRegistry> {
        let items = self
            .modules
            .iter()
            .map(|e| Ok((e.name.clone(), e.into_module(a)?)))
            .collect::<Result<Vec<_>>>()?;
        IndecRegistry::new(a.clone(), items, self.complete_up_to_dim)
    }

    pub fn from_registry(reg: &IndecRegistry) -> Self {
        Self {
            modules: reg.items.iter().zip(&reg.names).map(|(m, n)| ModuleEntry::from_module(n, m)).collect(),
            complete_up_to_dim: reg.complete_up_to,
        }
    }
}
