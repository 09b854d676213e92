//! Finite-dimensional representations on the flag of polynomial spaces
//! `P_n = span{ r^a u^b : a + 2b <= n }`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffring::{Expr, Monomial, MultiPoly, Scalar, Var};
use crate::error::{Error, Result};
use crate::linalg;
use crate::report::{timed, CheckReport};
use crate::weyl::DiffOp;

/// Monomials `r^a u^b` of `P_n`, ordered by weight `a + 2b`, then by
/// decreasing power of `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    elements: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn new(n: usize) -> Self {
        let mut elements = Vec::new();
        for w in 0..=n as u32 {
            for b in 0..=w / 2 {
                elements.push((w - 2 * b, b));
            }
        }
        MonomialBasis { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(u32, u32)] {
        &self.elements
    }

    pub fn index_of(&self, a: u32, b: u32) -> Option<usize> {
        self.elements.iter().position(|&e| e == (a, b))
    }

    pub fn weight(&self, i: usize) -> u32 {
        let (a, b) = self.elements[i];
        a + 2 * b
    }

    pub fn element(&self, i: usize) -> Expr {
        let (a, b) = self.elements[i];
        Expr::poly(monomial_ru(a, b))
    }

    pub fn label(&self, i: usize) -> String {
        let m = monomial_ru(self.elements[i].0, self.elements[i].1);
        m.to_string()
    }
}

/// `sum_{k<=n} (floor(k/2) + 1)`.
pub fn flag_dim(n: usize) -> usize {
    (0..=n).map(|k| k / 2 + 1).sum()
}

fn monomial_ru(a: u32, b: u32) -> MultiPoly {
    MultiPoly::term(Monomial::from_exps(&[(Var::R, a as u8), (Var::U, b as u8)]), Scalar::one())
}

fn falling(a: u32, k: u32) -> i64 {
    (0..k).map(|j| (a - j) as i64).product()
}

fn require_ru(a: &DiffOp) -> Result<()> {
    if a.spec().space() != [Var::R, Var::U] {
        return Err(Error::Invalid(format!("operator lives on chart `{}`, expected (r, u)", a.spec().name())));
    }
    Ok(())
}

fn require_polynomial(a: &DiffOp) -> Result<()> {
    for c in a.terms().values() {
        if !c.is_poly() {
            return Err(Error::NotPolynomial(c.to_string()));
        }
    }
    Ok(())
}

/// `A (r^a u^b)` for an operator on `(r, u)` with polynomial coefficients.
pub fn apply_monomial(op: &DiffOp, a: u32, b: u32) -> MultiPoly {
    let mut acc = Vec::new();
    for (idx, c) in op.terms() {
        let (i, j) = (idx.get(0) as u32, idx.get(1) as u32);
        if i > a || j > b {
            continue;
        }
        let k = falling(a, i) * falling(b, j);
        let m = Monomial::from_exps(&[(Var::R, (a - i) as u8), (Var::U, (b - j) as u8)]);
        acc.push(c.num().mul_term(&m, &Scalar::int(k)));
    }
    acc.iter().fold(MultiPoly::zero(), |s, p| &s + p)
}

/// Splits a polynomial by its `(r, u)` exponents; values are polynomials in
/// the remaining symbols.
fn split_ru(p: &MultiPoly) -> BTreeMap<(u32, u32), MultiPoly> {
    let mut parts: BTreeMap<(u32, u32), Vec<(Monomial, Scalar)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key = (m.exp(Var::R) as u32, m.exp(Var::U) as u32);
        let rest = m.with_exp(Var::R, 0).with_exp(Var::U, 0);
        parts.entry(key).or_default().push((rest, c.clone()));
    }
    parts.into_iter().map(|(k, ts)| (k, MultiPoly::from_terms(ts))).collect()
}

/// A monomial leaving `P_n` and its image.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub monomial: (u32, u32),
    pub image: MultiPoly,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", monomial_ru(self.monomial.0, self.monomial.1), self.image)
    }
}

/// First basis monomial whose image leaves `P_n`, if any.
pub fn invariance_witness(op: &DiffOp, n: usize) -> Result<Option<Witness>> {
    require_ru(op)?;
    require_polynomial(op)?;
    let basis = MonomialBasis::new(n);
    for &(a, b) in basis.elements() {
        let img = apply_monomial(op, a, b);
        let leaves = img.terms().iter().any(|(m, _)| (m.exp(Var::R) as usize) + 2 * (m.exp(Var::U) as usize) > n);
        if leaves {
            return Ok(Some(Witness { monomial: (a, b), image: img }));
        }
    }
    Ok(None)
}

pub fn is_invariant(op: &DiffOp, n: usize) -> Result<bool> {
    Ok(invariance_witness(op, n)?.is_none())
}

/// Exact matrix of an operator on `P_n`: `A e_j = sum_i M[i][j] e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: MonomialBasis,
    entries: Vec<Vec<MultiPoly>>,
}

impl OperatorMatrix {
    pub fn identity(n: usize) -> Self {
        let basis = MonomialBasis::new(n);
        let d = basis.len();
        let entries =
            (0..d).map(|i| (0..d).map(|j| if i == j { MultiPoly::one() } else { MultiPoly::zero() }).collect()).collect();
        OperatorMatrix { basis, entries }
    }

    pub fn zero(n: usize) -> Self {
        let basis = MonomialBasis::new(n);
        let d = basis.len();
        OperatorMatrix { basis, entries: vec![vec![MultiPoly::zero(); d]; d] }
    }

    pub fn scale(&self, k: &crate::coeffring::Scalar) -> Self {
        let entries = self.entries.iter().map(|row| row.iter().map(|x| x.scale(k)).collect()).collect();
        OperatorMatrix { basis: self.basis.clone(), entries }
    }

    pub fn from_entries(n: usize, entries: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let basis = MonomialBasis::new(n);
        if entries.len() != basis.len() || entries.iter().any(|r| r.len() != basis.len()) {
            return Err(Error::Invalid("matrix size does not match the basis".into()));
        }
        Ok(OperatorMatrix { basis, entries })
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.basis != o.basis {
            return Err(Error::Invalid("matrices act on different flag spaces".into()));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let d = self.dim();
        let entries = (0..d)
            .into_par_iter()
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .filter(|&k| !self.entries[i][k].is_zero() && !o.entries[k][j].is_zero())
                            .fold(MultiPoly::zero(), |s, k| &s + &(&self.entries[i][k] * &o.entries[k][j]))
                    })
                    .collect()
            })
            .collect();
        Ok(OperatorMatrix { basis: self.basis.clone(), entries })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(OperatorMatrix { basis: self.basis.clone(), entries })
    }

    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(MultiPoly::is_zero))
    }

    /// Whether `M[i][j] = 0` whenever basis weight `i` exceeds weight `j`.
    pub fn is_block_upper_triangular(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.basis.weight(i) <= self.basis.weight(j) || self.entries[i][j].is_zero()))
    }

    /// Entries at a numeric parameter point.
    pub fn specialize(&self, point: &[(Var, Scalar)]) -> Result<Vec<Vec<Scalar>>> {
        let bindings: Vec<(Var, MultiPoly)> = point.iter().map(|(v, s)| (*v, MultiPoly::constant(s.clone()))).collect();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let s = e.substitute(&bindings);
                        s.constant_value().ok_or_else(|| Error::Invalid(format!("entry `{s}` is not fully specialized")))
                    })
                    .collect()
            })
            .collect()
    }

    /// Basis labels and entry strings, for export.
    pub fn to_export(&self) -> MatrixExport {
        MatrixExport {
            n: self.basis.n,
            basis: (0..self.dim()).map(|i| self.basis.label(i)).collect(),
            entries: self.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixExport {
    pub n: usize,
    pub basis: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

/// Matrix of `op` on `P_n`; fails with a witness if `P_n` is not invariant.
pub fn matrix_of(op: &DiffOp, n: usize) -> Result<OperatorMatrix> {
    if let Some(w) = invariance_witness(op, n)? {
        return Err(Error::NotInvariant { n, witness: w.to_string() });
    }
    let basis = MonomialBasis::new(n);
    let d = basis.len();
    let columns: Vec<BTreeMap<(u32, u32), MultiPoly>> =
        basis.elements().par_iter().map(|&(a, b)| split_ru(&apply_monomial(op, a, b))).collect();
    let mut entries = vec![vec![MultiPoly::zero(); d]; d];
    for (j, col) in columns.into_iter().enumerate() {
        for ((a, b), c) in col {
            let i = basis.index_of(a, b).expect("invariance checked");
            entries[i][j] = c;
        }
    }
    Ok(OperatorMatrix { basis, entries })
}

/// Groups of mutually reachable indices (strongly connected components of
/// the nonzero pattern), in an order making the matrix block triangular.
fn diagonal_blocks(m: &[Vec<MultiPoly>]) -> Vec<Vec<usize>> {
    let d = m.len();
    let mut reach = vec![vec![false; d]; d];
    for i in 0..d {
        reach[i][i] = true;
        for j in 0..d {
            if !m[i][j].is_zero() {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..d {
        for i in 0..d {
            if reach[i][k] {
                for j in 0..d {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; d];
    let mut blocks = Vec::new();
    for i in 0..d {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (0..d).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &block {
            seen[j] = true;
        }
        blocks.push(block);
    }
    blocks
}

/// Fraction-free (Bareiss) determinant over the polynomial ring.
pub fn bareiss_det(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// `det(lambda I - M)` as a polynomial in `lambda` and the parameters.
pub fn char_poly(m: &OperatorMatrix) -> MultiPoly {
    let lambda = MultiPoly::var(Var::Lambda);
    let blocks = diagonal_blocks(&m.entries);
    let dets: Vec<MultiPoly> = blocks
        .par_iter()
        .map(|block| {
            let sub: Vec<Vec<MultiPoly>> = block
                .iter()
                .map(|&i| {
                    block
                        .iter()
                        .map(|&j| if i == j { &lambda - &m.entries[i][j] } else { -&m.entries[i][j] })
                        .collect()
                })
                .collect();
            bareiss_det(sub)
        })
        .collect();
    dets.iter().fold(MultiPoly::one(), |acc, d| &acc * d)
}

/// Kernel of `M - lambda I` at a parameter point, as polynomials in `(r, u)`.
pub fn kernel_polynomials(m: &OperatorMatrix, lambda: &Scalar, point: &[(Var, Scalar)]) -> Result<Vec<Expr>> {
    let mut num = m.specialize(point)?;
    for (i, row) in num.iter_mut().enumerate() {
        row[i] = &row[i] - lambda;
    }
    let ker = linalg::kernel(&num);
    Ok(ker
        .into_iter()
        .map(|v| {
            let terms: Vec<Expr> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| m.basis.element(i).scale(c))
                .collect();
            Expr::sum(terms.iter())
        })
        .collect())
}

/// `prod_{k=0}^{n} (lambda - beta(k+1+p+mu))^(floor(k/2)+1)`.
pub fn expected_char_poly(n: usize) -> MultiPoly {
    let lambda = MultiPoly::var(Var::Lambda);
    let base = &(&MultiPoly::one() + &MultiPoly::var(Var::P)) + &MultiPoly::var(Var::Mu);
    let beta = MultiPoly::var(Var::Beta);
    (0..=n).fold(MultiPoly::one(), |acc, k| {
        let ev = &beta * &(&base + &MultiPoly::int(k as i64));
        &acc * &(&lambda - &ev).pow(k as u32 / 2 + 1)
    })
}

/// `beta(k+1+p+mu)` at a parameter point.
pub fn eigenvalue_at(k: usize, point: &[(Var, Scalar)]) -> Result<Scalar> {
    let get = |v: Var| point.iter().find(|(w, _)| *w == v).map(|(_, s)| s.clone()).ok_or(Error::UnknownVariable(v.to_string()));
    let base = &(&Scalar::int(k as i64 + 1) + &get(Var::P)?) + &get(Var::Mu)?;
    Ok(&get(Var::Beta)? * &base)
}

/// Eigenpolynomials of `h_a` on `P_n` for the `k`-th eigenvalue at a
/// numeric parameter point. Fails if two eigenvalues coincide there.
pub fn eigenpolynomials(n: usize, k: usize, point: &[(Var, Scalar)]) -> Result<Vec<Expr>> {
    if k > n {
        return Err(Error::Invalid(format!("eigenvalue index {k} exceeds n = {n}")));
    }
    let lambda = eigenvalue_at(k, point)?;
    for j in 0..=n {
        if j != k && eigenvalue_at(j, point)? == lambda {
            return Err(Error::EigenvalueCollision);
        }
    }
    kernel_polynomials(&matrix_of(&crate::coulomb2d::h_a(), n)?, &lambda, point)
}

/// A generic rational point used for the kernel-dimension count.
pub fn generic_point() -> Vec<(Var, Scalar)> {
    vec![(Var::Beta, Scalar::ratio(7, 3)), (Var::Mu, Scalar::ratio(5, 11)), (Var::P, Scalar::ratio(2, 9))]
}

/// Characteristic polynomial of `h_a` on `P_n` against the closed form,
/// plus a count of eigenpolynomials at a generic point.
pub fn verify_spectrum(n: usize) -> CheckReport {
    verify_spectrum_at(n, &generic_point())
}

/// [`verify_spectrum`] with the eigenpolynomials taken at `point`.
pub fn verify_spectrum_at(n: usize, point: &[(Var, Scalar)]) -> CheckReport {
    timed(&format!("2d.spectrum.n{n}"), |rep| {
        let m = matrix_of(&crate::coulomb2d::h_a(), n)?;
        let got = char_poly(&m);
        let diff = &got - &expected_char_poly(n);
        rep.require("char poly", diff.is_zero(), format!("{} differing terms", diff.len()));
        let mut total = 0;
        for k in 0..=n {
            let ker = eigenpolynomials(n, k, point)?;
            for p in &ker {
                let image = crate::coulomb2d::h_a().substitute(&to_exprs(point))?.apply(p)?;
                let ev = Expr::constant(eigenvalue_at(k, point)?);
                rep.require(&format!("h_a q = lambda_{k} q"), image == &ev * p, p);
            }
            total += ker.len();
        }
        rep.require("eigenpolynomial count", total == flag_dim(n), format!("{total} of {}", flag_dim(n)));
        Ok(())
    })
}

fn to_exprs(point: &[(Var, Scalar)]) -> Vec<(Var, Expr)> {
    point.iter().map(|(v, s)| (*v, Expr::constant(s.clone()))).collect()
}

/// Checks `A = B` by applying `A - B` to every `r^a u^b` with `a, b <= bound`.
pub fn equality_oracle(a: &DiffOp, b: &DiffOp, bound: u32) -> Result<bool> {
    let d = a.sub(b)?;
    require_ru(&d)?;
    require_polynomial(&d)?;
    for i in 0..=bound {
        for j in 0..=bound {
            if !apply_monomial(&d, i, j).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest oracle bound that is conclusive for `A - B`: maximal derivative
/// order (a nonzero operator of order `k` is detected on monomials of
/// degree `<= k` in each variable).
pub fn oracle_bound(a: &DiffOp, b: &DiffOp) -> u32 {
    a.order().max(b.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::parse_operator;
    use crate::weyl::VariableSpec;

    fn op(text: &str) -> DiffOp {
        parse_operator(text, &VariableSpec::r_u()).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(MonomialBasis::new(0).elements(), &[(0, 0)]);
        assert_eq!(MonomialBasis::new(2).elements(), &[(0, 0), (1, 0), (2, 0), (0, 1)]);
        assert_eq!(MonomialBasis::new(5).len(), 12);
        for n in 0..10 {
            assert_eq!(MonomialBasis::new(n).len(), flag_dim(n));
        }
    }

    #[test]
    fn invariance_and_witness() {
        assert!(is_invariant(&op("D[u]"), 4).unwrap());
        let w = invariance_witness(&op("r^3"), 1).unwrap().unwrap();
        assert_eq!(w.monomial, (0, 0));
        assert_eq!(w.image, MultiPoly::var(Var::R).pow(3));
        assert!(matches!(matrix_of(&op("r^3"), 1), Err(Error::NotInvariant { .. })));
        let rational = parse_operator("1/u*D[r]", &VariableSpec::r_u()).unwrap();
        assert!(matches!(is_invariant(&rational, 2), Err(Error::NotPolynomial(_))));
    }

    #[test]
    fn identity_matrix() {
        assert_eq!(matrix_of(&op("1"), 2).unwrap(), OperatorMatrix::identity(2));
    }

    #[test]
    fn matrix_is_homomorphic() {
        let a = op("r*D[r]^2 + 2*u*D[u] - beta*D[r]");
        let b = op("u*D[u]^2 + r^2*D[u] + mu");
        for n in 0..5 {
            let ab = matrix_of(&a.compose(&b).unwrap(), n).unwrap();
            let ma = matrix_of(&a, n).unwrap();
            let mb = matrix_of(&b, n).unwrap();
            assert_eq!(ab, ma.mul(&mb).unwrap());
        }
    }

    #[test]
    fn char_poly_small_cases() {
        let z = OperatorMatrix::from_entries(1, vec![vec![MultiPoly::zero(); 2]; 2]).unwrap();
        assert_eq!(char_poly(&z), MultiPoly::var(Var::Lambda).pow(2));
        let beta = MultiPoly::var(Var::Beta);
        let lam = MultiPoly::var(Var::Lambda);
        let d = OperatorMatrix::from_entries(
            1,
            vec![vec![beta.clone(), MultiPoly::zero()], vec![MultiPoly::zero(), beta.scale(&Scalar::int(2))]],
        )
        .unwrap();
        assert_eq!(char_poly(&d), &(&lam - &beta) * &(&lam - &beta.scale(&Scalar::int(2))));
    }

    #[test]
    fn bareiss_matches_cofactor_on_dense_block() {
        let x = MultiPoly::var(Var::Beta);
        let m = vec![
            vec![x.clone(), MultiPoly::int(1), MultiPoly::int(2)],
            vec![MultiPoly::int(3), &x + &MultiPoly::int(1), MultiPoly::zero()],
            vec![MultiPoly::int(1), MultiPoly::int(1), x.clone()],
        ];
        // x*((x+1)x) - 1*(3x) + 2*(3 - (x+1))
        let expected = &(&(&x.pow(3) + &x.pow(2)) - &x.scale(&Scalar::int(3))) + &(&MultiPoly::int(4) - &x.scale(&Scalar::int(2)));
        assert_eq!(bareiss_det(m), expected);
    }

    #[test]
    fn oracle_detects_difference() {
        let a = op("D[r]");
        let b = op("D[u]");
        assert!(!equality_oracle(&a, &b, 2).unwrap());
        assert!(equality_oracle(&a, &a, 2).unwrap());
    }

    #[test]
    fn spectrum_small_n() {
        for n in 0..=4 {
            let rep = verify_spectrum(n);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn eigenvalue_collision_is_reported() {
        let point = vec![(Var::Beta, Scalar::zero()), (Var::Mu, Scalar::one()), (Var::P, Scalar::zero())];
        assert!(matches!(eigenpolynomials(2, 1, &point), Err(Error::EigenvalueCollision)));
    }

    #[test]
    fn ground_state_is_constant() {
        let ker = eigenpolynomials(3, 0, &generic_point()).unwrap();
        assert_eq!(ker.len(), 1);
        assert!(ker[0].constant_value().is_some());
    }
}
