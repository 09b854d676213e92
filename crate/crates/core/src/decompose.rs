//! Expressing an operator as a combination of ordered monomials in a set
//! of generator operators, by exact linear solves.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffring::{Expr, Monomial, MultiPoly, Scalar, Var};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::weyl::{DerivIndex, DiffOp, VariableSpec};

/// Nondecreasing generator indices, read left to right as a product.
pub type OrderedMonomial = Vec<usize>;

/// All ordered monomials of degree `<= max_degree` whose differential order
/// (sum of generator orders) is at most `max_order`.
pub fn ordered_monomials(orders: &[u32], max_degree: usize, max_order: u32) -> Vec<OrderedMonomial> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<OrderedMonomial> = vec![Vec::new()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for g in start..orders.len() {
                let mut m2 = m.clone();
                m2.push(g);
                let ord: u32 = m2.iter().map(|&k| orders[k]).sum();
                if ord <= max_order {
                    next.push(m2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn monomial_label(m: &OrderedMonomial, names: &[&str]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut k = 0;
    while k < m.len() {
        let mut e = 1;
        while k + e < m.len() && m[k + e] == m[k] {
            e += 1;
        }
        parts.push(if e == 1 { names[m[k]].to_string() } else { format!("{}^{e}", names[m[k]]) });
        k += e;
    }
    parts.join("*")
}

/// Products of generators, memoized on prefixes.
pub struct ProductCache<'a> {
    spec: Arc<VariableSpec>,
    gens: &'a [DiffOp],
    cache: HashMap<OrderedMonomial, DiffOp>,
}

impl<'a> ProductCache<'a> {
    pub fn new(spec: &Arc<VariableSpec>, gens: &'a [DiffOp]) -> Self {
        ProductCache { spec: spec.clone(), gens, cache: HashMap::new() }
    }

    pub fn get(&mut self, m: &[usize]) -> Result<DiffOp> {
        if let Some(p) = self.cache.get(m) {
            return Ok(p.clone());
        }
        let p = match m.split_last() {
            None => DiffOp::identity(&self.spec),
            Some((last, prefix)) => self.get(prefix)?.compose(&self.gens[*last])?,
        };
        self.cache.insert(m.to_vec(), p.clone());
        Ok(p)
    }
}

type Key = (DerivIndex, Monomial);

fn coefficient_map(op: &DiffOp) -> Result<BTreeMap<Key, Scalar>> {
    let mut out = BTreeMap::new();
    for (idx, c) in op.terms() {
        let p = c.as_poly().ok_or_else(|| Error::NotPolynomial(c.to_string()))?;
        for (m, s) in p.terms() {
            out.insert((*idx, *m), s.clone());
        }
    }
    Ok(out)
}

/// Exact solve of `target = sum_k x_k products[k]` with scalar unknowns.
///
/// Every coefficient monomial (in all symbols) gives one equation, so
/// symbolic parameters in `target` or `products` are treated as
/// independent. Returns the solution (free unknowns zero), the rank and
/// whether the system was consistent; on inconsistency the solution of
/// the consistent part is returned.
pub fn solve_scalar(target: &DiffOp, products: &[DiffOp]) -> Result<ScalarSolve> {
    let maps: Vec<BTreeMap<Key, Scalar>> = products.par_iter().map(coefficient_map).collect::<Result<_>>()?;
    let tmap = coefficient_map(target)?;
    let mut rows: BTreeMap<Key, SparseRow> = BTreeMap::new();
    for (k, m) in maps.iter().enumerate() {
        for (key, s) in m {
            rows.entry(*key).or_default().push((k, s.clone()));
        }
    }
    let n = products.len();
    for (key, s) in &tmap {
        rows.entry(*key).or_default().push((n, s.clone()));
    }
    let mut ech = Echelon::new(n);
    for (_, row) in rows {
        ech.push(row);
    }
    let consistent = ech.is_consistent();
    let rank = ech.rank();
    let x = if consistent {
        ech.solve(1).expect("consistent")[0].clone()
    } else {
        let mut clean = Echelon::new(n);
        let rows2 = ech_rows_without_rhs_conflicts(products, &maps, &tmap);
        for r in rows2 {
            clean.push(r);
        }
        clean.solve(1).map(|mut v| v.remove(0)).unwrap_or_else(|| vec![Scalar::zero(); n])
    };
    Ok(ScalarSolve { x, rank, consistent })
}

/// Equations restricted to keys that some product reaches; used to get a
/// best-effort solution when the full system is inconsistent.
fn ech_rows_without_rhs_conflicts(
    products: &[DiffOp],
    maps: &[BTreeMap<Key, Scalar>],
    tmap: &BTreeMap<Key, Scalar>,
) -> Vec<SparseRow> {
    let n = products.len();
    let mut rows: BTreeMap<Key, SparseRow> = BTreeMap::new();
    for (k, m) in maps.iter().enumerate() {
        for (key, s) in m {
            rows.entry(*key).or_default().push((k, s.clone()));
        }
    }
    let mut out = Vec::new();
    let mut ech = Echelon::new(n);
    for (key, mut row) in rows {
        if let Some(s) = tmap.get(&key) {
            row.push((n, s.clone()));
        }
        let mut trial = ech.clone();
        trial.push(row.clone());
        if trial.is_consistent() {
            ech = trial;
            out.push(row);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ScalarSolve {
    pub x: Vec<Scalar>,
    pub rank: usize,
    pub consistent: bool,
}

/// One decomposition attempt and its exact residual.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub target: String,
    pub generators: Vec<String>,
    pub monomials: Vec<OrderedMonomial>,
    pub coefficients: Vec<Expr>,
    pub residual: DiffOp,
    pub rank: usize,
    pub notes: Vec<String>,
}

impl Decomposition {
    pub fn succeeded(&self) -> bool {
        self.residual.is_zero()
    }

    /// Nonzero entries as `(monomial, coefficient)` strings.
    pub fn table(&self) -> Vec<(String, String)> {
        let names: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        self.monomials
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (monomial_label(m, &names), c.to_string()))
            .collect()
    }

    pub fn coefficient_of(&self, m: &[usize]) -> Expr {
        self.monomials.iter().position(|x| x == m).map(|k| self.coefficients[k].clone()).unwrap_or_default()
    }

    pub fn to_export(&self) -> DecompositionExport {
        DecompositionExport {
            target: self.target.clone(),
            generators: self.generators.clone(),
            success: self.succeeded(),
            residual_terms: self.residual.len(),
            coefficients: self.table().into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionExport {
    pub target: String,
    pub generators: Vec<String>,
    pub success: bool,
    pub residual_terms: usize,
    pub coefficients: BTreeMap<String, String>,
}

/// Splits the coefficients of `op` by monomials in `params`:
/// `op = sum_pi pi * op_pi` with `op_pi` free of `params`.
pub fn split_by_params(op: &DiffOp, params: &[Var]) -> Result<BTreeMap<Monomial, DiffOp>> {
    let mut parts: BTreeMap<Monomial, Vec<(DerivIndex, Expr)>> = BTreeMap::new();
    for (idx, c) in op.terms() {
        let p = c.as_poly().ok_or_else(|| Error::NotPolynomial(c.to_string()))?;
        let mut by: BTreeMap<Monomial, Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (m, s) in p.terms() {
            let mut pm = Monomial::one();
            let mut rest = *m;
            for &v in params {
                let e = m.exp(v);
                if e > 0 {
                    pm = pm.mul(&Monomial::var(v, e));
                    rest = rest.with_exp(v, 0);
                }
            }
            by.entry(pm).or_default().push((rest, s.clone()));
        }
        for (pm, ts) in by {
            parts.entry(pm).or_default().push((*idx, Expr::poly(MultiPoly::from_terms(ts))));
        }
    }
    Ok(parts.into_iter().map(|(pm, ts)| (pm, DiffOp::from_terms(op.spec(), ts))).collect())
}

/// Exact solves of `targets[s] = sum_k x_k products[k]` sharing one
/// elimination. Returns per-target solutions, consistency flags and the rank.
pub fn solve_many(targets: &[DiffOp], products: &[DiffOp]) -> Result<(Vec<Vec<Scalar>>, Vec<bool>, usize)> {
    let maps: Vec<BTreeMap<Key, Scalar>> = products.par_iter().map(coefficient_map).collect::<Result<_>>()?;
    let n = products.len();
    let mut rows: BTreeMap<Key, SparseRow> = BTreeMap::new();
    for (k, m) in maps.iter().enumerate() {
        for (key, s) in m {
            rows.entry(*key).or_default().push((k, s.clone()));
        }
    }
    for (t, target) in targets.iter().enumerate() {
        for (key, s) in coefficient_map(target)? {
            rows.entry(key).or_default().push((n + t, s));
        }
    }
    let mut ech = Echelon::new(n);
    for (_, row) in rows {
        ech.push(row);
    }
    Ok((ech.back_substitute(targets.len()), ech.consistent_columns(targets.len()), ech.rank()))
}

/// Decomposition over parameter-free generators: the target is split by
/// parameter monomials and each part solved exactly.
pub fn decompose_param_free(
    target_name: &str,
    target: &DiffOp,
    names: &[&str],
    gens: &[DiffOp],
    monomials: Vec<OrderedMonomial>,
    params: &[Var],
) -> Result<Decomposition> {
    let spec = target.spec().clone();
    let mut cache = ProductCache::new(&spec, gens);
    let products: Vec<DiffOp> = monomials.iter().map(|m| cache.get(m)).collect::<Result<_>>()?;
    let pieces: Vec<(Monomial, DiffOp)> = split_by_params(target, params)?.into_iter().collect();
    let piece_ops: Vec<DiffOp> = pieces.iter().map(|(_, op)| op.clone()).collect();
    let (sols, consistent, rank) = solve_many(&piece_ops, &products)?;
    let mut coeffs = vec![Vec::<Expr>::new(); monomials.len()];
    let mut notes = Vec::new();
    for (((pm, _), x), ok) in pieces.iter().zip(&sols).zip(&consistent) {
        if !ok {
            notes.push(format!("no exact solution for the part proportional to {pm}"));
        }
        let pmono = Expr::poly(MultiPoly::term(*pm, Scalar::one()));
        for (k, xk) in x.iter().enumerate() {
            if !xk.is_zero() {
                coeffs[k].push(pmono.scale(xk));
            }
        }
    }
    if rank < monomials.len() {
        notes.push(format!(
            "{} of {} ordered monomials are linearly dependent; free ones set to zero",
            monomials.len() - rank,
            monomials.len()
        ));
    }
    let coefficients: Vec<Expr> = coeffs.iter().map(|cs| Expr::sum(cs.iter())).collect();
    let recon = reconstruct(&spec, &products, &coefficients)?;
    Ok(Decomposition {
        target: target_name.to_string(),
        generators: names.iter().map(|s| s.to_string()).collect(),
        residual: target.sub(&recon)?,
        monomials,
        coefficients,
        rank,
        notes,
    })
}

/// `sum_k c_k products[k]`.
pub fn reconstruct(spec: &Arc<VariableSpec>, products: &[DiffOp], coeffs: &[Expr]) -> Result<DiffOp> {
    let parts: Vec<DiffOp> = products
        .par_iter()
        .zip(coeffs.par_iter())
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| p.lmul(c))
        .collect::<Result<_>>()?;
    DiffOp::sum(spec, &parts)
}

/// Lagrange interpolation in one variable through `(x_i, y_i)`.
pub fn interpolate(var: Var, points: &[(Scalar, Expr)]) -> Expr {
    let x = Expr::var(var);
    let mut parts = Vec::with_capacity(points.len());
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = yi.clone();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let den = (xi - xj).inv().expect("distinct nodes");
                basis = &basis * &(&x - &Expr::constant(xj.clone())).scale(&den);
            }
        }
        parts.push(basis);
    }
    Expr::sum(parts.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::parse_operator;

    #[test]
    fn monomial_enumeration() {
        let ms = ordered_monomials(&[1, 2], 2, 3);
        // 1, a, b, aa, ab (order 3); bb has order 4
        assert_eq!(ms, vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1]]);
        assert_eq!(monomial_label(&vec![0, 0, 1], &["h", "l"]), "h^2*l");
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let pts: Vec<(Scalar, Expr)> = (0..4).map(|k| (Scalar::int(k), Expr::int(k * k * k - 2 * k + 1))).collect();
        let f = interpolate(Var::Beta, &pts);
        let b = Expr::var(Var::Beta);
        assert_eq!(f, &(&b.pow(3).unwrap() - &b.scale(&Scalar::int(2))) + &Expr::one());
    }

    #[test]
    fn param_free_decomposition_finds_combination() {
        let s = VariableSpec::r_u();
        let a = parse_operator("D[r]", &s).unwrap();
        let b = parse_operator("r*D[u]", &s).unwrap();
        // D[r]*r*D[u] = r D[r] D[u] + D[u]
        let target = parse_operator("beta*D[r]*r*D[u] + mu*D[r]^2 + 3", &s).unwrap();
        let ms = ordered_monomials(&[1, 1], 2, 2);
        let d = decompose_param_free("t", &target, &["a", "b"], &[a, b], ms, &[Var::Beta, Var::Mu]).unwrap();
        assert!(d.succeeded());
        assert_eq!(d.coefficient_of(&[0, 1]), Expr::var(Var::Beta));
        assert_eq!(d.coefficient_of(&[0, 0]), Expr::var(Var::Mu));
        assert_eq!(d.coefficient_of(&[]), Expr::int(3));
    }
}
