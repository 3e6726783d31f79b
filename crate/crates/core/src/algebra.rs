//! Finite-dimensional associative unital algebras given by structure constants.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{self, check_prime, Eliminator, Matrix};

/// Comultiplication, counit and antipode of a Hopf algebra, all in the
/// algebra's basis. `comul[j]` is the coefficient vector of `Δ(b_j)` in the
/// basis `b_i ⊗ b_k` (index `i * dim + k`); `antipode[j]` is `S(b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfData {
    pub comul: Vec<Vec<u8>>,
    pub counit: Vec<u8>,
    pub antipode: Vec<Vec<u8>>,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    p: u8,
    dim: usize,
    basis_names: Vec<String>,
    /// `mul[i][j]` = coefficients of `b_i * b_j`.
    mul: Vec<Vec<Vec<u8>>>,
    unit: Vec<u8>,
    commutative: bool,
    hopf: Option<HopfData>,
    /// Basis indices whose actions determine a module structure.
    generators: OnceLock<Vec<usize>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim == other.dim
            && self.mul == other.mul
            && self.unit == other.unit
            && self.commutative == other.commutative
            && self.hopf == other.hopf
    }
}

impl Eq for Algebra {}

/// One violated axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Shape(String),
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
    Commutativity { i: usize, j: usize },
    Hopf(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::Associativity { i, j, k } => {
                write!(f, "associativity fails at (b{i} b{j}) b{k} != b{i} (b{j} b{k})")
            }
            Violation::LeftUnit { i } => write!(f, "unit * b{i} != b{i}"),
            Violation::RightUnit { i } => write!(f, "b{i} * unit != b{i}"),
            Violation::Commutativity { i, j } => write!(f, "b{i} b{j} != b{j} b{i} but algebra is flagged commutative"),
            Violation::Hopf(s) => write!(f, "hopf: {s}"),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AlgebraReport {
    pub violations: Vec<Violation>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Algebra {
    /// Assembles an algebra without checking axioms; see [`validate_algebra`].
    pub fn from_parts(
        p: u8,
        basis_names: Vec<String>,
        mul: Vec<Vec<Vec<u8>>>,
        unit: Vec<u8>,
        commutative: bool,
        hopf: Option<HopfData>,
    ) -> Result<Self> {
        check_prime(p)?;
        let dim = basis_names.len();
        let shape_ok = mul.len() == dim
            && mul.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim))
            && unit.len() == dim;
        if !shape_ok {
            return Err(Error::Validation(format!("structure constants do not match dimension {dim}")));
        }
        if let Some(h) = &hopf {
            let ok = h.comul.len() == dim
                && h.comul.iter().all(|v| v.len() == dim * dim)
                && h.counit.len() == dim
                && h.antipode.len() == dim
                && h.antipode.iter().all(|v| v.len() == dim);
            if !ok {
                return Err(Error::Validation("hopf data does not match dimension".into()));
            }
        }
        let red = |v: Vec<u8>| v.into_iter().map(|x| x % p).collect::<Vec<_>>();
        let mul = mul.into_iter().map(|row| row.into_iter().map(red).collect()).collect();
        let hopf = hopf.map(|h| HopfData {
            comul: h.comul.into_iter().map(red).collect(),
            counit: red(h.counit),
            antipode: h.antipode.into_iter().map(red).collect(),
        });
        Ok(Self { p, dim, basis_names, mul, unit: red(unit), commutative, hopf, generators: OnceLock::new() })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit(&self) -> &[u8] {
        &self.unit
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn hopf(&self) -> Option<&HopfData> {
        self.hopf.as_ref()
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &[u8] {
        &self.mul[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.dim];
        v[i] = 1;
        v
    }

    /// Product of two elements given by coefficient vectors.
    pub fn product(&self, x: &[u8], y: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut out = vec![0u8; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                exactla::axpy(p, &mut out, exactla::mul(p, xi, yj), &self.mul[i][j]);
            }
        }
        out
    }

    /// Matrix of left multiplication by `b_i`: column `j` is `b_i b_j`.
    pub fn left_mult(&self, i: usize) -> Matrix {
        Matrix::from_columns(self.p, self.dim, &self.mul[i])
    }

    /// Matrix of right multiplication by `b_j`.
    pub fn right_mult(&self, j: usize) -> Matrix {
        let cols: Vec<Vec<u8>> = (0..self.dim).map(|i| self.mul[i][j].clone()).collect();
        Matrix::from_columns(self.p, self.dim, &cols)
    }

    /// Basis elements whose actions determine every other action (the unit
    /// acting as identity). Falls back to the whole basis when the structure
    /// constants are not a valid algebra.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            if !validate_algebra(self).is_valid() {
                return (0..self.dim).collect();
            }
            self.generating_words().generators
        })
    }

    /// Pins the generator set, for algebras whose generators are known
    /// structurally and would be expensive to search for.
    pub fn with_generators(self, gens: Vec<usize>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(gens);
        Self { generators: cell, ..self }
    }

    /// Greedy irredundant set of basis elements generating the algebra, with
    /// every basis element expressed as a linear combination of words in them.
    pub fn generating_words(&self) -> GeneratingWords {
        let p = self.p;
        let span_of = |gens: &[usize]| -> (Vec<Vec<usize>>, Vec<Vec<u8>>) {
            // BFS over words; keep only words that enlarge the span.
            let mut words: Vec<Vec<usize>> = vec![vec![]];
            let mut elems: Vec<Vec<u8>> = vec![self.unit.clone()];
            let mut e = Eliminator::new(p, self.dim);
            e.push(self.unit.clone());
            let mut frontier = vec![0usize];
            while !frontier.is_empty() && !e.is_full() {
                let mut next = Vec::new();
                for &w in &frontier {
                    for &g in gens {
                        let el = self.product(&self.basis_vector(g), &elems[w]);
                        if e.push(el.clone()) {
                            let mut word = vec![g];
                            word.extend_from_slice(&words[w]);
                            words.push(word);
                            elems.push(el);
                            next.push(elems.len() - 1);
                        }
                    }
                }
                frontier = next;
            }
            (words, elems)
        };
        let mut gens: Vec<usize> = Vec::new();
        for i in 0..self.dim {
            let (_, elems) = span_of(&gens);
            let sub = exactla::Subspace::from_spanning(p, self.dim, &elems);
            if sub.is_full() {
                break;
            }
            if !sub.contains_vector(&self.basis_vector(i)) {
                gens.push(i);
            }
        }
        // drop redundant generators
        let mut k = 0;
        while k < gens.len() {
            let mut trial = gens.clone();
            trial.remove(k);
            let (_, elems) = span_of(&trial);
            if exactla::Subspace::from_spanning(p, self.dim, &elems).is_full() {
                gens = trial;
            } else {
                k += 1;
            }
        }
        let (words, elems) = span_of(&gens);
        // basis b_k = sum_w c[k][w] word_w
        let word_matrix = Matrix::from_columns(p, self.dim, &elems);
        let expressions = (0..self.dim)
            .map(|k| {
                word_matrix
                    .solve(&self.basis_vector(k))
                    .expect("dimensions agree")
                    .expect("words span the algebra")
            })
            .collect();
        GeneratingWords { generators: gens, words, expressions }
    }

    /// Whether the algebra is semisimple and commutative, i.e. a product of
    /// fields: commutative with no nonzero nilpotents.
    pub fn is_reduced_commutative(&self) -> bool {
        if !self.commutative {
            return false;
        }
        // Frobenius x -> x^p is linear on a commutative algebra of characteristic p;
        // the algebra is reduced iff it is injective.
        let p = self.p;
        let frob: Vec<Vec<u8>> = (0..self.dim)
            .map(|i| {
                let b = self.basis_vector(i);
                let mut acc = self.unit.clone();
                for _ in 0..p {
                    acc = self.product(&acc, &b);
                }
                acc
            })
            .collect();
        Matrix::from_columns(p, self.dim, &frob).rank() == self.dim
    }
}

/// See [`Algebra::generating_words`].
#[derive(Clone, Debug)]
pub struct GeneratingWords {
    pub generators: Vec<usize>,
    /// Each word is a sequence of generator basis indices, applied right to left.
    pub words: Vec<Vec<usize>>,
    /// `expressions[k][w]` is the coefficient of word `w` in basis element `k`.
    pub expressions: Vec<Vec<u8>>,
}

/// Checks every algebra (and Hopf) axiom on basis elements.
pub fn validate_algebra(a: &Algebra) -> AlgebraReport {
    let mut violations = Vec::new();
    let n = a.dim;
    for i in 0..n {
        for j in 0..n {
            let bij = &a.mul[i][j];
            for k in 0..n {
                let lhs = a.product(bij, &a.basis_vector(k));
                let rhs = a.product(&a.basis_vector(i), &a.mul[j][k]);
                if lhs != rhs {
                    violations.push(Violation::Associativity { i, j, k });
                }
            }
            if a.commutative && j > i && a.mul[i][j] != a.mul[j][i] {
                violations.push(Violation::Commutativity { i, j });
            }
        }
        let b = a.basis_vector(i);
        if a.product(&a.unit, &b) != b {
            violations.push(Violation::LeftUnit { i });
        }
        if a.product(&b, &a.unit) != b {
            violations.push(Violation::RightUnit { i });
        }
    }
    if let Some(h) = &a.hopf {
        check_hopf(a, h, &mut violations);
    }
    AlgebraReport { violations }
}

fn check_hopf(a: &Algebra, h: &HopfData, out: &mut Vec<Violation>) {
    let n = a.dim;
    let p = a.p;
    let delta = |x: &[u8]| -> Vec<u8> {
        let mut acc = vec![0u8; n * n];
        for (j, &c) in x.iter().enumerate() {
            exactla::axpy(p, &mut acc, c, &h.comul[j]);
        }
        acc
    };
    let counit = |x: &[u8]| -> u8 {
        x.iter().zip(&h.counit).fold(0u8, |s, (&a, &b)| exactla::add(p, s, exactla::mul(p, a, b)))
    };
    // product in A ⊗ A
    let tensor_product = |x: &[u8], y: &[u8]| -> Vec<u8> {
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                let c = x[i * n + k];
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    for l in 0..n {
                        let d = y[j * n + l];
                        if d == 0 {
                            continue;
                        }
                        let left = &a.mul[i][j];
                        let right = &a.mul[k][l];
                        let cd = exactla::mul(p, c, d);
                        for (s, &ls) in left.iter().enumerate() {
                            if ls == 0 {
                                continue;
                            }
                            for (t, &rt) in right.iter().enumerate() {
                                if rt != 0 {
                                    let idx = s * n + t;
                                    out[idx] = exactla::add(p, out[idx], exactla::mul(p, cd, exactla::mul(p, ls, rt)));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    };
    let unit_tensor = {
        let mut v = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                v[i * n + k] = exactla::mul(p, a.unit[i], a.unit[k]);
            }
        }
        v
    };
    if delta(&a.unit) != unit_tensor {
        out.push(Violation::Hopf("comultiplication does not preserve the unit".into()));
    }
    if counit(&a.unit) != 1 {
        out.push(Violation::Hopf("counit does not preserve the unit".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = delta(&a.mul[i][j]);
            let rhs = tensor_product(&h.comul[i], &h.comul[j]);
            if lhs != rhs {
                out.push(Violation::Hopf(format!("comultiplication is not multiplicative at (b{i}, b{j})")));
            }
            if counit(&a.mul[i][j]) != exactla::mul(p, h.counit[i], h.counit[j]) {
                out.push(Violation::Hopf(format!("counit is not multiplicative at (b{i}, b{j})")));
            }
        }
    }
    for j in 0..n {
        let d = &h.comul[j];
        // coassociativity
        let mut left = vec![0u8; n * n * n];
        let mut right = vec![0u8; n * n * n];
        for i in 0..n {
            for k in 0..n {
                let c = d[i * n + k];
                if c == 0 {
                    continue;
                }
                let di = &h.comul[i];
                let dk = &h.comul[k];
                for s in 0..n {
                    for t in 0..n {
                        let idx_l = (s * n + t) * n + k;
                        left[idx_l] = exactla::add(p, left[idx_l], exactla::mul(p, c, di[s * n + t]));
                        let idx_r = (i * n + s) * n + t;
                        right[idx_r] = exactla::add(p, right[idx_r], exactla::mul(p, c, dk[s * n + t]));
                    }
                }
            }
        }
        if left != right {
            out.push(Violation::Hopf(format!("comultiplication is not coassociative at b{j}")));
        }
        // counit laws and antipode laws
        let mut left_counit = vec![0u8; n];
        let mut right_counit = vec![0u8; n];
        let mut left_anti = vec![0u8; n];
        let mut right_anti = vec![0u8; n];
        for i in 0..n {
            for k in 0..n {
                let c = d[i * n + k];
                if c == 0 {
                    continue;
                }
                exactla::axpy(p, &mut left_counit, exactla::mul(p, c, h.counit[i]), &a.basis_vector(k));
                exactla::axpy(p, &mut right_counit, exactla::mul(p, c, h.counit[k]), &a.basis_vector(i));
                exactla::axpy(p, &mut left_anti, c, &a.product(&h.antipode[i], &a.basis_vector(k)));
                exactla::axpy(p, &mut right_anti, c, &a.product(&a.basis_vector(i), &h.antipode[k]));
            }
        }
        let b = a.basis_vector(j);
        if left_counit != b || right_counit != b {
            out.push(Violation::Hopf(format!("counit law fails at b{j}")));
        }
        let mut eta_eps = a.unit.clone();
        exactla::scale_vec(p, &mut eta_eps, h.counit[j]);
        if left_anti != eta_eps || right_anti != eta_eps {
            out.push(Violation::Hopf(format!("antipode law fails at b{j}")));
        }
    }
}

/// `k[ε]/(ε^n)` with basis `1, ε, ..., ε^{n-1}`.
pub fn build_truncated_poly(p: u8, n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::Usage("truncated polynomial algebra needs n >= 1".into()));
    }
    let names = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "e".to_string(),
            _ => format!("e^{k}"),
        })
        .collect();
    let mul = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![0u8; n];
                    if i + j < n {
                        v[i + j] = 1;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut unit = vec![0u8; n];
    unit[0] = 1;
    Algebra::from_parts(p, names, mul, unit, true, None)
}

/// Group algebra `k C_n` with basis `g^0, ..., g^{n-1}` and its Hopf structure
/// `Δ(g) = g ⊗ g`, `ε(g) = 1`, `S(g) = g^{-1}`.
pub fn build_group_algebra(p: u8, cyclic_order: usize) -> Result<Algebra> {
    let n = cyclic_order;
    if n == 0 {
        return Err(Error::Usage("cyclic group order must be >= 1".into()));
    }
    let unit_vec = |k: usize| {
        let mut v = vec![0u8; n];
        v[k % n] = 1;
        v
    };
    let names = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{k}"),
        })
        .collect();
    let mul = (0..n).map(|i| (0..n).map(|j| unit_vec(i + j)).collect()).collect();
    let comul = (0..n)
        .map(|j| {
            let mut v = vec![0u8; n * n];
            v[j * n + j] = 1;
            v
        })
        .collect();
    let hopf = HopfData {
        comul,
        counit: vec![1; n],
        antipode: (0..n).map(|j| unit_vec(n - j)).collect(),
    };
    Algebra::from_parts(p, names, mul, unit_vec(0), true, Some(hopf))
}

/// `k × ... × k` with orthogonal idempotent basis.
pub fn build_product_algebra(p: u8, factors: usize) -> Result<Algebra> {
    let n = factors;
    if n == 0 {
        return Err(Error::Usage("product algebra needs at least one factor".into()));
    }
    let names = (1..=n).map(|k| format!("e{k}")).collect();
    let mul = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![0u8; n];
                    if i == j {
                        v[i] = 1;
                    }
                    v
                })
                .collect()
        })
        .collect();
    Algebra::from_parts(p, names, mul, vec![1; n], true, None)
}

/// On-disk algebra description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub p: u8,
    pub dim: usize,
    pub basis: Vec<String>,
    pub mul: Vec<Vec<Vec<i64>>>,
    pub unit: Vec<i64>,
    pub commutative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf: Option<HopfFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HopfFile {
    pub comul: Vec<Vec<i64>>,
    pub counit: Vec<i64>,
    pub antipode: Vec<Vec<i64>>,
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<Algebra> {
        check_prime(self.p)?;
        let p = self.p;
        if self.basis.len() != self.dim {
            return Err(Error::Validation(format!(
                "basis has {} names but dim is {}",
                self.basis.len(),
                self.dim
            )));
        }
        let red = |v: &[i64]| v.iter().map(|&x| exactla::residue(p, x)).collect::<Vec<u8>>();
        let mul = self.mul.iter().map(|row| row.iter().map(|v| red(v)).collect()).collect();
        let hopf = self.hopf.as_ref().map(|h| HopfData {
            comul: h.comul.iter().map(|v| red(v)).collect(),
            counit: red(&h.counit),
            antipode: h.antipode.iter().map(|v| red(v)).collect(),
        });
        Algebra::from_parts(p, self.basis, mul, red(&self.unit), self.commutative, hopf)
    }

    pub fn from_algebra(a: &Algebra) -> Self {
        let int = |v: &[u8]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
        Self {
            p: a.p,
            dim: a.dim,
            basis: a.basis_names.clone(),
            mul: a.mul.iter().map(|row| row.iter().map(|v| int(v)).collect()).collect(),
            unit: int(&a.unit),
            commutative: a.commutative,
            hopf: a.hopf.as_ref().map(|h| HopfFile {
                comul: h.comul.iter().map(|v| int(v)).collect(),
                counit: int(&h.counit),
                antipode: h.antipode.iter().map(|v| int(v)).collect(),
            }),
        }
    }
}

pub fn parse_algebra_json(text: &str) -> Result<Algebra> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    file.into_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        for a in [
            build_truncated_poly(2, 2).unwrap(),
            build_truncated_poly(2, 1).unwrap(),
            build_truncated_poly(3, 2).unwrap(),
            build_group_algebra(2, 2).unwrap(),
            build_group_algebra(2, 1).unwrap(),
            build_group_algebra(3, 3).unwrap(),
            build_product_algebra(2, 2).unwrap(),
            build_product_algebra(2, 1).unwrap(),
            build_product_algebra(2, 3).unwrap(),
        ] {
            let r = validate_algebra(&a);
            assert!(r.is_valid(), "{:?}", r.violations);
        }
    }

    #[test]
    fn truncated_poly_squares_to_zero() {
        let a = build_truncated_poly(2, 2).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.structure_constant(1, 1), &[0, 0]);
        assert!(a.is_commutative());
        let f = build_truncated_poly(2, 1).unwrap();
        assert_eq!(f.dim(), 1);
    }

    #[test]
    fn product_algebra_idempotents() {
        let a = build_product_algebra(2, 2).unwrap();
        assert_eq!(a.structure_constant(0, 1), &[0, 0]);
        assert_eq!(a.structure_constant(0, 0), &[1, 0]);
        assert!(a.is_reduced_commutative());
        assert!(!build_truncated_poly(2, 2).unwrap().is_reduced_commutative());
    }

    #[test]
    fn broken_associativity_is_reported() {
        // b1 b1 = b1 but b1 b2 = b2, b2 b1 = 0, b2 b2 = b1 in a 3-dim space with unit b0.
        let e = |v: [u8; 3]| v.to_vec();
        let mul = vec![
            vec![e([1, 0, 0]), e([0, 1, 0]), e([0, 0, 1])],
            vec![e([0, 1, 0]), e([0, 1, 0]), e([0, 0, 1])],
            vec![e([0, 0, 1]), e([0, 0, 0]), e([0, 1, 0])],
        ];
        let a = Algebra::from_parts(2, vec!["1".into(), "x".into(), "y".into()], mul, e([1, 0, 0]), false, None)
            .unwrap();
        let r = validate_algebra(&a);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn group_algebra_is_truncated_poly_in_char_two() {
        // basis change g = 1 + e: columns are images of (1, g) in the basis (1, e)
        let poly = build_truncated_poly(2, 2).unwrap();
        let grp = build_group_algebra(2, 2).unwrap();
        let change = Matrix::from_rows(2, 2, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(change.is_invertible());
        for i in 0..2 {
            for j in 0..2 {
                let gi = change.column(i);
                let gj = change.column(j);
                let lhs = poly.product(&gi, &gj);
                let rhs = change.mul_vec(grp.structure_constant(i, j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let a = build_group_algebra(3, 3).unwrap();
        let text = serde_json::to_string(&AlgebraFile::from_algebra(&a)).unwrap();
        assert_eq!(parse_algebra_json(&text).unwrap(), a);
    }

    #[test]
    fn generating_words_cover_basis() {
        let a = build_product_algebra(2, 3).unwrap();
        let g = a.generating_words();
        assert_eq!(g.generators.len(), 2);
        let a = build_group_algebra(3, 3).unwrap();
        assert_eq!(a.generating_words().generators, vec![1]);
    }
}
