//! Definable classes, Serre ideals, closure tests, exactness probes, Ziegler
//! topologies and duality of finitely presented functors.
//!
//! At finite representation type a definable class is determined by the
//! indecomposables it contains, so it is stored as a support subset of the
//! module registry. Its annihilator Serre subcategory is stored by the
//! indecomposable functors that vanish on the support.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{self, Matrix, Subspace};
use crate::funcat::{
    day_tensor, day_tensor_nat, evaluate, evaluate_mor, nat_cokernel, nat_hom, Auslander, FpFunctor,
    FunctorRegistry, NatTransf, SumObject,
};
use crate::modcat::{
    decompose, direct_sum, divides, format_multiplicities, hom_space, IndecRegistry, Module, ModuleMorphism,
};
use crate::monoidal::{TensorKind, TensorStructure};

/// Everything the correspondence computations need: a tensor structure, the
/// transport to the Auslander algebra, and a functor registry.
#[derive(Clone, Debug)]
pub struct Context {
    pub tensor: TensorStructure,
    pub auslander: Auslander,
    pub functors: FunctorRegistry,
}

impl Context {
    pub fn new(tensor: TensorStructure, registry: IndecRegistry, functors: Vec<(String, FpFunctor)>) -> Result<Self> {
        let auslander = Auslander::new(registry)?;
        let functors = FunctorRegistry::new(&auslander, functors)?;
        Ok(Self { tensor, auslander, functors })
    }

    /// Builds the functor registry by discovery, naming items `F1`, `F2`, ...
    pub fn discover(tensor: TensorStructure, registry: IndecRegistry, dim_bound: usize, budget: u64) -> Result<Self> {
        let auslander = Auslander::new(registry)?;
        let found = auslander.discover_indec_functors(dim_bound, budget)?;
        let named = found.into_iter().enumerate().map(|(i, f)| (format!("F{}", i + 1), f)).collect();
        let functors = FunctorRegistry::new(&auslander, named)?;
        Ok(Self { tensor, auslander, functors })
    }

    pub fn registry(&self) -> &IndecRegistry {
        self.auslander.registry()
    }

    pub fn decompose_functor(&self, f: &FpFunctor) -> Result<Vec<(usize, usize)>> {
        self.auslander.decompose_functor(f, &self.functors)
    }

    pub fn functor_label(&self, mult: &[(usize, usize)]) -> String {
        format_multiplicities(mult, self.functors.names())
    }

    pub fn module_label(&self, mult: &[(usize, usize)]) -> String {
        format_multiplicities(mult, self.registry().names())
    }
}

// ---------------------------------------------------------------------------
// Definable classes and Serre ideals
// ---------------------------------------------------------------------------

/// A definable class at finite representation type: all direct sums of the
/// support items.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefinableClass {
    support: Vec<usize>,
}

impl DefinableClass {
    pub fn new(support: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = support.into_iter().collect();
        Self { support: set.into_iter().collect() }
    }

    pub fn full(n: usize) -> Self {
        Self::new(0..n)
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }

    pub fn names(&self, reg: &IndecRegistry) -> Vec<String> {
        self.support.iter().map(|&i| reg.name(i).to_string()).collect()
    }

    /// `0`, `all`, or `<U,R>`.
    pub fn label(&self, reg: &IndecRegistry) -> String {
        if self.support.is_empty() {
            "0".into()
        } else if self.support.len() == reg.len() {
            "all".into()
        } else {
            format!("<{}>", self.names(reg).join(","))
        }
    }

    /// Whether every Krull-Schmidt summand of `m` lies in the support.
    pub fn contains_module(&self, m: &Module, reg: &IndecRegistry) -> Result<Option<usize>> {
        Ok(decompose(m, reg)?.into_iter().map(|(i, _)| i).find(|&i| !self.contains_index(i)))
    }

    /// Every support subset of an `n`-item registry, by size and then lexicographically.
    pub fn all_subsets(n: usize) -> Vec<DefinableClass> {
        let mut out: Vec<DefinableClass> = (0u64..(1u64 << n))
            .map(|mask| DefinableClass::new((0..n).filter(|&i| mask >> i & 1 == 1)))
            .collect();
        out.sort_by(|a, b| a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support)));
        out
    }
}

/// Whether `F` vanishes on every support item.
pub fn serre_membership(f: &FpFunctor, d: &DefinableClass, reg: &IndecRegistry) -> Result<bool> {
    for &i in d.support() {
        if evaluate(f, reg.item(i))?.dim() != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indecomposable functors annihilating the class, in registry order.
pub fn serre_generators(ctx: &Context, d: &DefinableClass) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (k, f) in ctx.functors.functors().iter().enumerate() {
        if serre_membership(f, d, ctx.registry())? {
            out.push(k);
        }
    }
    Ok(out)
}

/// Renders a Serre ideal given by its indecomposable members.
pub fn serre_label(ctx: &Context, members: &[usize]) -> String {
    if members.is_empty() {
        "0".into()
    } else {
        let names: Vec<&str> = members.iter().map(|&k| ctx.functors.name(k)).collect();
        format!("<{}>", names.join(","))
    }
}

/// Outcome of a closure test on a definable class.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClosureCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ClosureWitness>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClosureWitness {
    /// Object the operation was taken with.
    pub with: String,
    /// Member of the class (or functor) it was applied to.
    pub member: String,
    /// Summand outside the class.
    pub summand: String,
}

impl ClosureCheck {
    fn pass() -> Self {
        Self { holds: true, witness: None }
    }

    fn fail(with: &str, member: &str, summand: &str) -> Self {
        Self {
            holds: false,
            witness: Some(ClosureWitness { with: with.into(), member: member.into(), summand: summand.into() }),
        }
    }
}

fn module_closure(
    ctx: &Context,
    d: &DefinableClass,
    others: &[usize],
    op: impl Fn(&Module, &Module) -> Result<Module>,
) -> Result<ClosureCheck> {
    let reg = ctx.registry();
    for &c in others {
        for &m in d.support() {
            let x = op(reg.item(c), reg.item(m))?;
            if let Some(bad) = d.contains_module(&x, reg)? {
                return Ok(ClosureCheck::fail(reg.name(c), reg.name(m), reg.name(bad)));
            }
        }
    }
    Ok(ClosureCheck::pass())
}

/// `hom(C, M)` stays in the class for every registry `C` and support `M`.
pub fn is_fp_hom_closed(ctx: &Context, d: &DefinableClass) -> Result<ClosureCheck> {
    let all: Vec<usize> = (0..ctx.registry().len()).collect();
    module_closure(ctx, d, &all, |c, m| Ok(ctx.tensor.internal_hom(c, m)?.module))
}

/// `C ⊗ M` stays in the class for every registry `C` and support `M`.
pub fn is_tensor_ideal_definable(ctx: &Context, d: &DefinableClass) -> Result<ClosureCheck> {
    let all: Vec<usize> = (0..ctx.registry().len()).collect();
    module_closure(ctx, d, &all, |c, m| ctx.tensor.tensor_obj(c, m))
}

/// `M ⊗ N` stays in the class for support `M`, `N`.
pub fn is_monoidal_definable(ctx: &Context, d: &DefinableClass) -> Result<ClosureCheck> {
    module_closure(ctx, d, d.support(), |c, m| ctx.tensor.tensor_obj(c, m))
}

fn functor_closure(
    ctx: &Context,
    members: &[usize],
    others: &[(String, FpFunctor)],
) -> Result<ClosureCheck> {
    for (name, g) in others {
        for &k in members {
            let x = day_tensor(g, ctx.functors.functor(k), &ctx.tensor)?;
            for (s, _) in ctx.decompose_functor(&x)? {
                if !members.contains(&s) {
                    return Ok(ClosureCheck::fail(name, ctx.functors.name(k), ctx.functors.name(s)));
                }
            }
        }
    }
    Ok(ClosureCheck::pass())
}

/// `(C, -) ⊗ F` stays in the ideal for every registry `C` and member `F`.
pub fn is_serre_tensor_ideal(ctx: &Context, members: &[usize]) -> Result<ClosureCheck> {
    let reps: Vec<(String, FpFunctor)> = ctx
        .registry()
        .items()
        .iter()
        .zip(ctx.registry().names())
        .map(|(c, n)| (format!("({n},-)"), FpFunctor::yoneda(c)))
        .collect();
    functor_closure(ctx, members, &reps)
}

/// `F ⊗ G` stays in the ideal for members `F`, `G`.
pub fn is_serre_monoidal(ctx: &Context, members: &[usize]) -> Result<ClosureCheck> {
    let own: Vec<(String, FpFunctor)> =
        members.iter().map(|&k| (ctx.functors.name(k).to_string(), ctx.functors.functor(k).clone())).collect();
    functor_closure(ctx, members, &own)
}

// ---------------------------------------------------------------------------
// Exactness probes
// ---------------------------------------------------------------------------

/// A morphism between sums of registry items, in printable form.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MorphismRecord {
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<i64>>,
}

/// `(f ⊗ U) | h` and `(A ⊗ g) | h` but not `(f ⊗ g) | h`, for `h: A ⊗ U -> X`.
#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityWitness {
    pub f: MorphismRecord,
    pub g: MorphismRecord,
    pub x: String,
    pub h: Vec<Vec<i64>>,
    #[serde(skip)]
    pub morphisms: Option<(ModuleMorphism, ModuleMorphism, ModuleMorphism)>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum DivisibilityOutcome {
    Pass { bound: usize, pairs_checked: u64 },
    Fail { witness: Box<DivisibilityWitness> },
}

impl DivisibilityOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass { .. })
    }

    pub fn summary(&self) -> String {
        match self {
            Self::Pass { bound, .. } => format!("pass({bound})"),
            Self::Fail { .. } => "fail".into(),
        }
    }
}

struct Morph {
    a: usize,
    b: usize,
    m: ModuleMorphism,
}

fn enumerate_morphisms(objects: &[SumObject], bound: usize) -> Result<Vec<Morph>> {
    let mut out = Vec::new();
    for (ai, a) in objects.iter().enumerate() {
        if a.module.dim() == 0 {
            continue;
        }
        for (bi, b) in objects.iter().enumerate() {
            if a.module.dim() + b.module.dim() > bound {
                continue;
            }
            let h = hom_space(&a.module, &b.module)?;
            for coeffs in exactla::all_vectors(a.module.p(), h.dim()) {
                let m = ModuleMorphism::new_unchecked(a.module.clone(), b.module.clone(), h.element(&coeffs));
                out.push(Morph { a: ai, b: bi, m });
            }
        }
    }
    Ok(out)
}

/// Checks `Im(- ∘ (f ⊗ U)) ∩ Im(- ∘ (A ⊗ g)) ⊆ Im(- ∘ (f ⊗ g))` inside
/// `Hom(A ⊗ U, X)` for all `f: A -> B`, `g: U -> V` between sums of registry
/// items with `dim A + dim B <= bound` (and likewise for `g`), and all support `X`.
pub fn exactness_divisibility(
    ctx: &Context,
    d: &DefinableClass,
    bound: usize,
    budget: u64,
) -> Result<DivisibilityOutcome> {
    let reg = ctx.registry();
    let t = &ctx.tensor;
    let objects = ctx.auslander.objects_up_to(bound);
    let morphs = enumerate_morphisms(&objects, bound)?;
    let pairs = (morphs.len() as u64).saturating_mul(morphs.len() as u64);
    let work = pairs.saturating_mul(d.support().len() as u64);
    if work > budget {
        return Err(Error::BudgetExceeded(format!(
            "divisibility probe needs {work} checks at dimension bound {bound} (budget {budget})"
        )));
    }
    let p = reg.algebra().p();
    let mut tensors: HashMap<(usize, usize), Module> = HashMap::new();
    let mut tensor_of = |x: usize, y: usize| -> Result<Module> {
        if let Some(m) = tensors.get(&(x, y)) {
            return Ok(m.clone());
        }
        let m = t.tensor_obj(&objects[x].module, &objects[y].module)?;
        tensors.insert((x, y), m.clone());
        Ok(m)
    };
    let mut checked = 0u64;
    for &xi in d.support() {
        let x = reg.item(xi);
        let mut homs: HashMap<(usize, usize), crate::modcat::HomSpace> = HashMap::new();
        let mut hom_of = |a: usize, u: usize, tensor_of: &mut dyn FnMut(usize, usize) -> Result<Module>| -> Result<crate::modcat::HomSpace> {
            if let Some(h) = homs.get(&(a, u)) {
                return Ok(h.clone());
            }
            let h = hom_space(&tensor_of(a, u)?, x)?;
            homs.insert((a, u), h.clone());
            Ok(h)
        };
        // image of precomposition with `k: S -> T` inside Hom(S, X)
        let image = |k: &ModuleMorphism, target_hom: &crate::modcat::HomSpace, source_hom: &crate::modcat::HomSpace| {
            let vecs: Vec<Vec<u8>> = target_hom
                .basis()
                .iter()
                .map(|psi| source_hom.coordinates(&psi.mul(k.matrix())).expect("module map"))
                .collect();
            Subspace::from_spanning(p, source_hom.dim(), &vecs)
        };
        let mut left_cache: HashMap<(usize, usize), Subspace> = HashMap::new();
        let mut right_cache: HashMap<(usize, usize), Subspace> = HashMap::new();
        for (fi, f) in morphs.iter().enumerate() {
            for (gi, g) in morphs.iter().enumerate() {
                checked += 1;
                let h_au = hom_of(f.a, g.a, &mut tensor_of)?;
                if h_au.dim() == 0 {
                    continue;
                }
                let i1 = match left_cache.get(&(fi, g.a)) {
                    Some(s) => s.clone(),
                    None => {
                        let fu = t.tensor_mor(&f.m, &objects[g.a].module.identity())?;
                        let h_bu = hom_of(f.b, g.a, &mut tensor_of)?;
                        let s = image(&fu, &h_bu, &h_au);
                        left_cache.insert((fi, g.a), s.clone());
                        s
                    }
                };
                let i2 = match right_cache.get(&(f.a, gi)) {
                    Some(s) => s.clone(),
                    None => {
                        let ag = t.tensor_mor(&objects[f.a].module.identity(), &g.m)?;
                        let h_av = hom_of(f.a, g.b, &mut tensor_of)?;
                        let s = image(&ag, &h_av, &h_au);
                        right_cache.insert((f.a, gi), s.clone());
                        s
                    }
                };
                let both = i1.intersection(&i2)?;
                if both.is_zero() {
                    continue;
                }
                let fg = t.tensor_mor(&f.m, &g.m)?;
                let h_bv = hom_of(f.b, g.b, &mut tensor_of)?;
                let i3 = image(&fg, &h_bv, &h_au);
                if let Some(v) = both.basis().iter().find(|v| !i3.contains_vector(v)) {
                    let h = h_au.element(v);
                    let record = |m: &Morph| MorphismRecord {
                        source: objects[m.a].label(reg),
                        target: objects[m.b].label(reg),
                        matrix: m.m.matrix().to_int_rows(),
                    };
                    let hm = ModuleMorphism::new_unchecked(h_au.source().clone(), x.clone(), h.clone());
                    return Ok(DivisibilityOutcome::Fail {
                        witness: Box::new(DivisibilityWitness {
                            f: record(f),
                            g: record(g),
                            x: reg.name(xi).to_string(),
                            h: h.to_int_rows(),
                            morphisms: Some((f.m.clone(), g.m.clone(), hm)),
                        }),
                    });
                }
            }
        }
    }
    Ok(DivisibilityOutcome::Pass { bound, pairs_checked: checked })
}

/// Re-checks a divisibility witness from scratch with [`divides`].
pub fn replay_divisibility_witness(t: &TensorStructure, f: &ModuleMorphism, g: &ModuleMorphism, h: &ModuleMorphism) -> Result<bool> {
    let fu = t.tensor_mor(f, &g.source().identity())?;
    let ag = t.tensor_mor(&f.source().identity(), g)?;
    let fg = t.tensor_mor(f, g)?;
    Ok(divides(&fu, h)? && divides(&ag, h)? && !divides(&fg, h)?)
}

/// A short exact sequence `0 -> F' -> F -> F'' -> 0` of functors.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub label: String,
    pub first: NatTransf,
    pub second: NatTransf,
}

/// Direct sum of functors.
pub fn functor_sum(ctx: &Context, fs: &[&FpFunctor]) -> Result<FpFunctor> {
    let a = ctx.registry().algebra();
    let sources: Vec<Module> = fs.iter().map(|f| f.source().clone()).collect();
    let targets: Vec<Module> = fs.iter().map(|f| f.target().clone()).collect();
    let src = direct_sum(a, &sources)?.module;
    let tgt = direct_sum(a, &targets)?.module;
    let blocks: Vec<Matrix> = fs.iter().map(|f| f.presentation().matrix().clone()).collect();
    let m = Matrix::block_diag(a.p(), &blocks);
    Ok(FpFunctor::new(ModuleMorphism::new_unchecked(src, tgt, m)))
}

/// Short exact sequences built from kernels, images and cokernels of
/// transformations between sums of at most `multiplicity` registry functors.
pub fn ses_battery(ctx: &Context, multiplicity: usize, budget: u64) -> Result<Vec<ShortExact>> {
    let n = ctx.functors.len();
    let mut sums: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(s) = stack.pop() {
        if s.len() < multiplicity {
            let last = *s.last().expect("nonempty");
            for j in last..n {
                let mut t = s.clone();
                t.push(j);
                stack.push(t);
            }
        }
        sums.push(s);
    }
    sums.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let label = |s: &[usize]| s.iter().map(|&k| ctx.functors.name(k)).collect::<Vec<_>>().join("+");
    let functor_of = |s: &[usize]| {
        let fs: Vec<&FpFunctor> = s.iter().map(|&k| ctx.functors.functor(k)).collect();
        functor_sum(ctx, &fs)
    };
    let p = ctx.registry().algebra().p();
    let mut out = Vec::new();
    for s in &sums {
        let f = functor_of(s)?;
        for r in &sums {
            let g = functor_of(r)?;
            let basis = nat_hom(&f, &g)?;
            let alphas: Vec<NatTransf> = if exactla::field_power(p, basis.len()) <= 16 {
                exactla::all_vectors(p, basis.len())
                    .skip(1)
                    .map(|c| combine_nat(&f, &g, &basis, &c))
                    .collect()
            } else {
                let mut v = basis.clone();
                let ones = vec![1u8; basis.len()];
                v.push(combine_nat(&f, &g, &basis, &ones));
                v
            };
            for (ai, alpha) in alphas.iter().enumerate() {
                if out.len() as u64 >= budget {
                    return Err(Error::BudgetExceeded(format!(
                        "exact-sequence battery exceeds {budget} sequences"
                    )));
                }
                let name = format!("{}->{}#{}", label(s), label(r), ai);
                let (_, incl) = ctx.auslander.nat_kernel(alpha)?;
                let (_, proj) = nat_cokernel(&incl)?;
                out.push(ShortExact { label: format!("ker/coimage of {name}"), first: incl, second: proj });
                let (_, cproj) = nat_cokernel(alpha)?;
                let (_, iincl) = ctx.auslander.nat_kernel(&cproj)?;
                out.push(ShortExact { label: format!("image/cokernel of {name}"), first: iincl, second: cproj });
            }
        }
    }
    Ok(out)
}

fn combine_nat(f: &FpFunctor, g: &FpFunctor, basis: &[NatTransf], coeffs: &[u8]) -> NatTransf {
    let mut acc = NatTransf::zero(f, g);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&b.scale(c)).expect("same endpoints");
        }
    }
    acc
}

/// Whether `0 -> A -a-> B -b-> C -> 0` is exact as linear maps.
pub fn is_short_exact(a: &Matrix, b: &Matrix) -> bool {
    let ra = a.rank();
    let rb = b.rank();
    ra == a.cols() && rb == b.rows() && b.mul(a).is_zero() && ra + rb == a.rows()
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceWitness {
    pub tensor_with: String,
    pub sequence: String,
    pub at: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum SequenceOutcome {
    Pass { sequences: usize },
    Fail { witness: SequenceWitness },
}

impl SequenceOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass { .. })
    }
}

/// Checks that `K ⊗ -` keeps every battery sequence exact at the support,
/// for every registry functor `K`.
pub fn fun_exactness_probe(ctx: &Context, d: &DefinableClass, battery: &[ShortExact]) -> Result<SequenceOutcome> {
    let reg = ctx.registry();
    for (kname, k) in ctx.functors.names().iter().zip(ctx.functors.functors()) {
        for ses in battery {
            let first = day_tensor_nat(k, &ses.first, &ctx.tensor)?;
            let second = day_tensor_nat(k, &ses.second, &ctx.tensor)?;
            for &xi in d.support() {
                let x = reg.item(xi);
                if !is_short_exact(&first.at(x)?, &second.at(x)?) {
                    return Ok(SequenceOutcome::Fail {
                        witness: SequenceWitness {
                            tensor_with: kname.clone(),
                            sequence: ses.label.clone(),
                            at: reg.name(xi).to_string(),
                        },
                    });
                }
            }
        }
    }
    Ok(SequenceOutcome::Pass { sequences: battery.len() })
}

// ---------------------------------------------------------------------------
// Ziegler topologies
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZieglerFlavor {
    Full,
    FpHom,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZieglerTopology {
    pub flavor: ZieglerFlavor,
    pub points: Vec<String>,
    pub closed_sets: Vec<Vec<usize>>,
}

impl ZieglerTopology {
    pub fn closed_set_names(&self) -> Vec<Vec<String>> {
        self.closed_sets.iter().map(|s| s.iter().map(|&i| self.points[i].clone()).collect()).collect()
    }
}

/// Closed sets: every support subset (all asserted definable) for `Full`,
/// the fp-hom-closed ones for `FpHom`. Topology axioms are checked.
pub fn ziegler(ctx: &Context, flavor: ZieglerFlavor) -> Result<ZieglerTopology> {
    let reg = ctx.registry();
    let mut closed = Vec::new();
    for d in DefinableClass::all_subsets(reg.len()) {
        let keep = match flavor {
            ZieglerFlavor::Full => true,
            ZieglerFlavor::FpHom => is_fp_hom_closed(ctx, &d)?.holds,
        };
        if keep {
            closed.push(d.support().to_vec());
        }
    }
    let topology = ZieglerTopology { flavor, points: reg.names().to_vec(), closed_sets: closed };
    check_topology(&topology, reg.len())?;
    Ok(topology)
}

fn check_topology(t: &ZieglerTopology, n: usize) -> Result<()> {
    let sets: BTreeSet<Vec<usize>> = t.closed_sets.iter().cloned().collect();
    let full: Vec<usize> = (0..n).collect();
    if !sets.contains(&Vec::new()) || !sets.contains(&full) {
        return Err(Error::Validation("closed sets must include the empty set and the whole space".into()));
    }
    for a in &sets {
        for b in &sets {
            let union: BTreeSet<usize> = a.iter().chain(b).copied().collect();
            let inter: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
            if !sets.contains(&union.into_iter().collect::<Vec<_>>()) || !sets.contains(&inter) {
                return Err(Error::Validation(format!("closed sets {a:?} and {b:?} break the topology axioms")));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub support: Vec<String>,
    pub label: String,
    pub definable_assertion: bool,
    pub monoidal: bool,
    pub fp_hom_closed: bool,
    pub tensor_ideal: bool,
    pub serre_generators: Vec<String>,
    pub serre_label: String,
    pub serre_monoidal: bool,
    pub serre_tensor_ideal: bool,
    pub exactness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

/// Classification of every support subset.
pub fn classify(ctx: &Context, exactness_bound: usize, budget: u64) -> Result<Vec<ClassRecord>> {
    let reg = ctx.registry();
    let mut out = Vec::new();
    for d in DefinableClass::all_subsets(reg.len()) {
        let gens = serre_generators(ctx, &d)?;
        let exact = exactness_divisibility(ctx, &d, exactness_bound, budget)?;
        let witness = match &exact {
            DivisibilityOutcome::Fail { witness } => Some(serde_json::to_value(witness.as_ref())?),
            DivisibilityOutcome::Pass { .. } => None,
        };
        out.push(ClassRecord {
            support: d.names(reg),
            label: d.label(reg),
            definable_assertion: true,
            monoidal: is_monoidal_definable(ctx, &d)?.holds,
            fp_hom_closed: is_fp_hom_closed(ctx, &d)?.holds,
            tensor_ideal: is_tensor_ideal_definable(ctx, &d)?.holds,
            serre_generators: gens.iter().map(|&k| ctx.functors.name(k).to_string()).collect(),
            serre_label: serre_label(ctx, &gens),
            serre_monoidal: is_serre_monoidal(ctx, &gens)?.holds,
            serre_tensor_ideal: is_serre_tensor_ideal(ctx, &gens)?.holds,
            exactness: exact.summary(),
            witness,
        });
    }
    Ok(out)
}

/// `(registry index, multiplicity)` pairs.
pub type Multiplicities = Vec<(usize, usize)>;

/// `Day(F_i, F_j)` decomposed against the functor registry, for all pairs.
pub fn day_table(ctx: &Context) -> Result<Vec<Vec<Multiplicities>>> {
    let fs = ctx.functors.functors();
    fs.iter()
        .map(|f| fs.iter().map(|g| ctx.decompose_functor(&day_tensor(f, g, &ctx.tensor)?)).collect())
        .collect()
}

/// Whether `G ⊗ F` stays in a Serre ideal for every registry `G`, with the
/// projective dimension of the member `F`.
#[derive(Clone, Debug, Serialize)]
pub struct PdimClosure {
    pub ideal: String,
    pub member: String,
    pub pdim: usize,
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ClosureWitness>,
}

/// One record per (Serre ideal, indecomposable member) pair.
pub fn pdim_closure(ctx: &Context) -> Result<Vec<PdimClosure>> {
    let mut out = Vec::new();
    let all: Vec<(String, FpFunctor)> = ctx
        .functors
        .names()
        .iter()
        .cloned()
        .zip(ctx.functors.functors().iter().cloned())
        .collect();
    for d in DefinableClass::all_subsets(ctx.registry().len()) {
        let members = serre_generators(ctx, &d)?;
        for &k in &members {
            let pd = ctx.auslander.pdim(ctx.functors.functor(k))?;
            let check = single_member_closure(ctx, &members, k, &all)?;
            out.push(PdimClosure {
                ideal: serre_label(ctx, &members),
                member: ctx.functors.name(k).to_string(),
                pdim: pd,
                closed: check.holds,
                witness: check.witness,
            });
        }
    }
    Ok(out)
}

fn single_member_closure(
    ctx: &Context,
    members: &[usize],
    k: usize,
    others: &[(String, FpFunctor)],
) -> Result<ClosureCheck> {
    for (name, g) in others {
        let x = day_tensor(g, ctx.functors.functor(k), &ctx.tensor)?;
        for (s, _) in ctx.decompose_functor(&x)? {
            if !members.contains(&s) {
                return Ok(ClosureCheck::fail(name, ctx.functors.name(k), ctx.functors.name(s)));
            }
        }
    }
    Ok(ClosureCheck::pass())
}

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

/// `δ` on every registry functor, matched back into the registry.
pub fn elementary_dual_table(ctx: &Context) -> Result<Vec<Vec<(usize, usize)>>> {
    ctx.functors
        .functors()
        .iter()
        .map(|f| {
            let d = ctx.auslander.elementary_dual(f, &ctx.tensor)?;
            ctx.decompose_functor(&d)
        })
        .collect()
}

/// `δ` applied to the indecomposable members of each Serre ideal, paired
/// with the ideal it lands on (if the image is one).
#[derive(Clone, Debug, Serialize)]
pub struct DualIdeal {
    pub ideal: Vec<usize>,
    pub image: Vec<usize>,
    pub image_is_ideal: bool,
}

pub fn dual_serre_ideals(ctx: &Context) -> Result<Vec<DualIdeal>> {
    let table = elementary_dual_table(ctx)?;
    let mut ideals = Vec::new();
    for d in DefinableClass::all_subsets(ctx.registry().len()) {
        ideals.push(serre_generators(ctx, &d)?);
    }
    Ok(ideals
        .iter()
        .map(|ideal| {
            let image: BTreeSet<usize> = ideal.iter().flat_map(|&k| table[k].iter().map(|&(i, _)| i)).collect();
            let image: Vec<usize> = image.into_iter().collect();
            let image_is_ideal = ideals.contains(&image);
            DualIdeal { ideal: ideal.clone(), image, image_is_ideal }
        })
        .collect())
}

/// A finitely presented contravariant functor `L = coker((-, m₁) -> (-, m₂))`
/// presented by `m: m₁ -> m₂`.
#[derive(Clone, Debug)]
pub struct RightFunctor {
    m: ModuleMorphism,
}

impl RightFunctor {
    pub fn new(m: ModuleMorphism) -> Self {
        Self { m }
    }

    /// `(-, a)`, presented by `0 -> a`.
    pub fn representable(a: &Module) -> Self {
        let zero = Module::zero(a.algebra().clone());
        Self { m: ModuleMorphism::zero(&zero, a) }
    }

    pub fn presentation(&self) -> &ModuleMorphism {
        &self.m
    }

    /// `L(X) = Hom(X, m₂) / (m ∘ Hom(X, m₁))`.
    pub fn evaluate_dim(&self, x: &Module) -> Result<usize> {
        let h2 = hom_space(x, self.m.target())?;
        let h1 = hom_space(x, self.m.source())?;
        let vecs: Vec<Vec<u8>> = h1
            .basis()
            .iter()
            .map(|phi| h2.coordinates(&self.m.matrix().mul(phi)).expect("module map"))
            .collect();
        Ok(h2.dim() - Subspace::from_spanning(x.p(), h2.dim(), &vecs).dim())
    }
}

fn require_rigid(t: &TensorStructure) -> Result<()> {
    if t.kind() == TensorKind::Hopf {
        Ok(())
    } else {
        Err(Error::Usage("dual presentations need a rigid (Hopf) tensor structure".into()))
    }
}

/// Left `F_n` (`n: n₁ -> n₂`) to the right module presented by `n^∨: n₂^∨ -> n₁^∨`.
pub fn dual_presentation_left(t: &TensorStructure, f: &FpFunctor) -> Result<RightFunctor> {
    require_rigid(t)?;
    Ok(RightFunctor::new(t.dual_morphism(f.presentation())?))
}

/// Right `L` (`m: m₁ -> m₂`) to the left functor `F_{m^∨}` with `m^∨: m₂^∨ -> m₁^∨`.
pub fn dual_presentation_right(t: &TensorStructure, l: &RightFunctor) -> Result<FpFunctor> {
    require_rigid(t)?;
    Ok(FpFunctor::new(t.dual_morphism(l.presentation())?))
}

/// `dim (L ⊗_A N) = dim coker(N(m): N(m₁) -> N(m₂))`.
pub fn tensor_over_a(l: &RightFunctor, n: &FpFunctor) -> Result<usize> {
    let nm = evaluate_mor(n, l.presentation())?;
    Ok(nm.rows() - nm.rank())
}

/// Day tensor of right modules:
/// `(l ⊗ m₂, l₂ ⊗ m): (l₁ ⊗ m₂) ⊕ (l₂ ⊗ m₁) -> l₂ ⊗ m₂`.
pub fn day_tensor_right(t: &TensorStructure, l: &RightFunctor, m: &RightFunctor) -> Result<RightFunctor> {
    let (lm, mm) = (l.presentation(), m.presentation());
    let lm2 = t.tensor_mor(lm, &mm.target().identity())?;
    let l2m = t.tensor_mor(&lm.target().identity(), mm)?;
    let a = t.algebra();
    let src = direct_sum(a, &[lm2.source().clone(), l2m.source().clone()])?.module;
    let mat = Matrix::hstack(a.p(), lm2.target().dim(), &[lm2.matrix().clone(), l2m.matrix().clone()]);
    Ok(RightFunctor::new(ModuleMorphism::new_unchecked(src, lm2.target().clone(), mat)))
}

/// Both sides of `(L ⊗ M) ⊗_A N ≅ L ⊗_A (M^d ⊗ N)` as dimensions.
pub fn lemma_dims(t: &TensorStructure, l: &RightFunctor, m: &RightFunctor, n: &FpFunctor) -> Result<(usize, usize)> {
    let lhs = tensor_over_a(&day_tensor_right(t, l, m)?, n)?;
    let md = dual_presentation_right(t, m)?;
    let rhs = tensor_over_a(l, &day_tensor(&md, n, t)?)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    fn context(name: &str) -> Context {
        let pr = preset(name).unwrap().unwrap();
        let t = TensorStructure::new(pr.structure, pr.algebra.clone()).unwrap();
        Context::new(t, pr.registry, pr.functors).unwrap()
    }

    fn table(ctx: &Context) -> Vec<Vec<String>> {
        day_table(ctx).unwrap().iter().map(|row| row.iter().map(|c| ctx.functor_label(c)).collect()).collect()
    }

    fn rows(t: &[[&str; 5]]) -> Vec<Vec<String>> {
        t.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn dual_numbers_tensor_table() {
        let ctx = context("example-5.1");
        let expected = rows(&[
            ["S", "0", "0", "S", "S"],
            ["0", "(U,-)", "(U,-)", "T", "T"],
            ["0", "(U,-)", "(U,-)", "(U,-)", "(U,-)"],
            ["S", "T", "(U,-)", "W", "W"],
            ["S", "T", "(U,-)", "W", "(R,-)"],
        ]);
        assert_eq!(table(&ctx), expected);
    }

    #[test]
    fn cyclic_group_tensor_table() {
        let ctx = context("example-5.2");
        let expected = rows(&[
            ["W", "0", "S", "W", "(R,-)"],
            ["0", "T", "T", "0", "0"],
            ["S", "T", "(U,-)", "W", "(R,-)"],
            ["W", "0", "W", "W", "(R,-)"],
            ["(R,-)", "0", "(R,-)", "(R,-)", "(R,-)^2"],
        ]);
        assert_eq!(table(&ctx), expected);
    }

    fn summary(ctx: &Context) -> Vec<(String, bool, bool, bool, String, bool, bool)> {
        DefinableClass::all_subsets(ctx.registry().len())
            .iter()
            .map(|d| {
                let gens = serre_generators(ctx, d).unwrap();
                (
                    d.label(ctx.registry()),
                    is_monoidal_definable(ctx, d).unwrap().holds,
                    is_fp_hom_closed(ctx, d).unwrap().holds,
                    is_tensor_ideal_definable(ctx, d).unwrap().holds,
                    serre_label(ctx, &gens),
                    is_serre_monoidal(ctx, &gens).unwrap().holds,
                    is_serre_tensor_ideal(ctx, &gens).unwrap().holds,
                )
            })
            .collect()
    }

    #[test]
    fn dual_numbers_summary() {
        let ctx = context("example-5.1");
        let all = "<S,T,(U,-),W,(R,-)>".to_string();
        assert_eq!(
            summary(&ctx),
            vec![
                ("0".into(), true, true, true, all, true, true),
                ("<U>".into(), true, true, true, "<S>".into(), true, true),
                ("<R>".into(), true, false, false, "<T>".into(), false, false),
                ("all".into(), true, true, true, "0".into(), true, true),
            ]
        );
        let w = is_fp_hom_closed(&ctx, &DefinableClass::new([1])).unwrap().witness.unwrap();
        assert_eq!((w.with.as_str(), w.member.as_str(), w.summand.as_str()), ("U", "R", "U"));
    }

    #[test]
    fn cyclic_group_summary() {
        let ctx = context("example-5.2");
        let all = "<S,T,(U,-),W,(R,-)>".to_string();
        let got: Vec<_> = summary(&ctx).into_iter().map(|r| (r.0, r.1, r.3, r.4, r.5, r.6)).collect();
        assert_eq!(
            got,
            vec![
                ("0".into(), true, true, all, true, true),
                ("<U>".into(), true, false, "<S>".into(), false, false),
                ("<R>".into(), true, true, "<T>".into(), true, true),
                ("all".into(), true, true, "0".into(), true, true),
            ]
        );
    }

    #[test]
    fn ziegler_closed_sets() {
        let a = context("example-5.1");
        assert_eq!(ziegler(&a, ZieglerFlavor::Full).unwrap().closed_sets.len(), 4);
        assert_eq!(ziegler(&a, ZieglerFlavor::FpHom).unwrap().closed_sets, vec![vec![], vec![0], vec![0, 1]]);
        let b = context("example-5.2");
        assert_eq!(ziegler(&b, ZieglerFlavor::FpHom).unwrap().closed_sets, vec![vec![], vec![1], vec![0, 1]]);
    }

    #[test]
    fn low_pdim_members_stay_closed() {
        let ctx = context("example-5.1");
        for r in pdim_closure(&ctx).unwrap() {
            if r.pdim <= 1 {
                assert!(r.closed, "{r:?}");
            }
        }
        let t = pdim_closure(&ctx).unwrap().into_iter().find(|r| r.ideal == "<T>").unwrap();
        assert_eq!(t.pdim, 2);
        let w = t.witness.unwrap();
        assert_eq!((w.with.as_str(), w.summand.as_str()), ("T", "(U,-)"));
    }

    #[test]
    fn divisibility_probe() {
        let ctx = context("example-5.1");
        let u = exactness_divisibility(&ctx, &DefinableClass::new([0]), 4, u64::MAX).unwrap();
        assert!(u.passed());
        let full = exactness_divisibility(&ctx, &DefinableClass::full(2), 4, u64::MAX).unwrap();
        let DivisibilityOutcome::Fail { witness } = full else { panic!("full class should fail") };
        let (f, g, h) = witness.morphisms.clone().unwrap();
        assert!(replay_divisibility_witness(&ctx.tensor, &f, &g, &h).unwrap());
    }

    #[test]
    fn sequence_probe() {
        let ctx = context("example-5.1");
        let battery = ses_battery(&ctx, 1, u64::MAX).unwrap();
        for s in &battery {
            for x in ctx.registry().items() {
                assert!(is_short_exact(&s.first.at(x).unwrap(), &s.second.at(x).unwrap()), "{}", s.label);
            }
        }
        assert!(fun_exactness_probe(&ctx, &DefinableClass::new([0]), &battery).unwrap().passed());
        assert!(!fun_exactness_probe(&ctx, &DefinableClass::full(2), &battery).unwrap().passed());
    }

    #[test]
    fn elementary_dual_swaps_u_and_w() {
        let ctx = context("example-5.1");
        let table = elementary_dual_table(&ctx).unwrap();
        assert_eq!(table, vec![vec![(0, 1)], vec![(1, 1)], vec![(3, 1)], vec![(2, 1)], vec![(4, 1)]]);
    }

    #[test]
    fn right_module_lemma_dims() {
        let ctx = context("example-5.2");
        let reg = ctx.registry();
        let l = RightFunctor::representable(reg.item(1));
        for (i, x) in reg.items().iter().enumerate() {
            let n = ctx.functors.functor(4);
            assert_eq!(tensor_over_a(&RightFunctor::representable(x), n).unwrap(), evaluate(n, x).unwrap().dim(), "{i}");
        }
        for f in ctx.functors.functors() {
            let m = dual_presentation_left(&ctx.tensor, f).unwrap();
            for n in ctx.functors.functors() {
                let (a, b) = lemma_dims(&ctx.tensor, &l, &m, n).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}
