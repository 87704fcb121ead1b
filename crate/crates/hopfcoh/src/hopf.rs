//! Finite-dimensional Hopf algebras presented by structure constants.
//!
//! An algebra here is a tuple of sparse structure matrices over an exact
//! field: multiplication `n × n²`, a unit vector, comultiplication `n² × n`,
//! counit `1 × n`, and the antipode `n × n` (its inverse is computed once at
//! construction — antipodes of finite-dimensional Hopf algebras are
//! bijective). Tensor-power indices are always flattened row-major, rightmost
//! factor fastest, matching [`crate::sparse::SparseMatrix::kron`].
//!
//! Built-in families: group algebras (with ready-made cyclic and symmetric
//! group tables), duals, opposites, Sweedler's four-dimensional Hopf algebra,
//! and the Taft algebras.

use crate::field::{Field, Scalar};
use crate::sparse::{tensor_permutation, SparseMatrix, SparseVec};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

/// Shared handle to an immutable Hopf algebra.
pub type HopfRef = Arc<HopfAlgebra>;

/// A finite-dimensional Hopf algebra given by structure constants.
pub struct HopfAlgebra {
    field: Field,
    name: String,
    dim: usize,
    mul: SparseMatrix,          // n × n²
    unit: SparseVec,            // n
    comul: SparseMatrix,        // n² × n
    counit: SparseMatrix,       // 1 × n
    antipode: SparseMatrix,     // n × n
    antipode_inv: SparseMatrix, // n × n
    comul_cache: RwLock<BTreeMap<usize, SparseMatrix>>,
    mul_cache: RwLock<BTreeMap<usize, SparseMatrix>>,
}

impl std::fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HopfAlgebra")
            .field("name", &self.name)
            .field("field", &self.field)
            .field("dim", &self.dim)
            .finish()
    }
}

impl HopfAlgebra {
    /// Build and fully verify an algebra from its structure constants.
    pub fn new(
        field: Field,
        name: &str,
        mul: SparseMatrix,
        unit: SparseVec,
        comul: SparseMatrix,
        counit: SparseMatrix,
        antipode: SparseMatrix,
    ) -> Result<HopfRef> {
        let h = HopfAlgebra::new_unverified(field, name, mul, unit, comul, counit, antipode)?;
        h.verify()?;
        Ok(h)
    }

    /// Build with shape checks only; axioms are not verified. The antipode
    /// inverse is still computed, so a non-bijective antipode fails here.
    pub fn new_unverified(
        field: Field,
        name: &str,
        mul: SparseMatrix,
        unit: SparseVec,
        comul: SparseMatrix,
        counit: SparseMatrix,
        antipode: SparseMatrix,
    ) -> Result<HopfRef> {
        let n = antipode.nrows();
        let shape = |ok: bool, what: &str, expected: usize, got: usize| {
            if ok {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    context: format!("hopf algebra {name}: {what}"),
                    expected,
                    got,
                })
            }
        };
        shape(n > 0, "dimension", 1, n)?;
        shape(antipode.ncols() == n, "antipode columns", n, antipode.ncols())?;
        shape(mul.nrows() == n, "multiplication rows", n, mul.nrows())?;
        shape(mul.ncols() == n * n, "multiplication columns", n * n, mul.ncols())?;
        shape(unit.dim() == n, "unit vector", n, unit.dim())?;
        shape(comul.nrows() == n * n, "comultiplication rows", n * n, comul.nrows())?;
        shape(comul.ncols() == n, "comultiplication columns", n, comul.ncols())?;
        shape(counit.nrows() == 1, "counit rows", 1, counit.nrows())?;
        shape(counit.ncols() == n, "counit columns", n, counit.ncols())?;
        for m in [&mul, &comul, &counit, &antipode] {
            if m.field() != field {
                return Err(Error::AlgebraMismatch);
            }
        }
        if unit.field() != field {
            return Err(Error::AlgebraMismatch);
        }
        let antipode_inv = antipode.inverse().map_err(|_| {
            Error::Verification(vec![format!(
                "hopf algebra {name}: the antipode is not bijective"
            )])
        })?;
        Ok(Arc::new(HopfAlgebra {
            field,
            name: name.to_string(),
            dim: n,
            mul,
            unit,
            comul,
            counit,
            antipode,
            antipode_inv,
            comul_cache: RwLock::new(BTreeMap::new()),
            mul_cache: RwLock::new(BTreeMap::new()),
        }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Multiplication `A ⊗ A → A` as an `n × n²` matrix.
    pub fn mul(&self) -> &SparseMatrix {
        &self.mul
    }

    /// The unit element as a coefficient vector.
    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    /// The unit as an `n × 1` matrix (the map `k → A`).
    pub fn unit_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_col_vecs(self.field, self.dim, &[self.unit.clone()])
    }

    /// Comultiplication `A → A ⊗ A` as an `n² × n` matrix.
    pub fn comul(&self) -> &SparseMatrix {
        &self.comul
    }

    /// Counit `A → k` as a `1 × n` matrix.
    pub fn counit(&self) -> &SparseMatrix {
        &self.counit
    }

    pub fn antipode(&self) -> &SparseMatrix {
        &self.antipode
    }

    pub fn antipode_inv(&self) -> &SparseMatrix {
        &self.antipode_inv
    }

    /// `n^k`, guarding against overflow.
    pub fn pow_dim(&self, k: usize) -> usize {
        self.dim.checked_pow(k as u32).expect("tensor power overflows usize")
    }

    /// The iterated comultiplication `Δ^(k): A → A^{⊗(k+1)}`, with
    /// `Δ^(0) = id` and `Δ^(k) = (Δ ⊗ 1^{⊗(k-1)}) ∘ Δ^(k-1)`.
    pub fn iterated_comul(&self, k: usize) -> SparseMatrix {
        if let Some(m) = self.comul_cache.read().unwrap().get(&k) {
            return m.clone();
        }
        let result = match k {
            0 => SparseMatrix::identity(self.field, self.dim),
            1 => self.comul.clone(),
            _ => {
                let prev = self.iterated_comul(k - 1);
                let left = self
                    .comul
                    .kron(&SparseMatrix::identity(self.field, self.pow_dim(k - 1)));
                left.mul(&prev)
            }
        };
        self.comul_cache
            .write()
            .unwrap()
            .insert(k, result.clone());
        result
    }

    /// The iterated multiplication `m^(k): A^{⊗(k+1)} → A`, with `m^(0) = id`
    /// and `m^(k) = m ∘ (m^(k-1) ⊗ 1)`.
    pub fn iterated_mul(&self, k: usize) -> SparseMatrix {
        if let Some(m) = self.mul_cache.read().unwrap().get(&k) {
            return m.clone();
        }
        let result = match k {
            0 => SparseMatrix::identity(self.field, self.dim),
            1 => self.mul.clone(),
            _ => {
                let prev = self.iterated_mul(k - 1);
                self.mul
                    .mul(&prev.kron(&SparseMatrix::identity(self.field, self.dim)))
            }
        };
        self.mul_cache.write().unwrap().insert(k, result.clone());
        result
    }

    /// Multiply two elements given as coefficient vectors.
    pub fn product(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut entries = Vec::new();
        for (i, va) in a.entries() {
            for (j, vb) in b.entries() {
                entries.push((i * self.dim + j, va.mul(vb)));
            }
        }
        let ab = SparseVec::from_entries(self.field, self.dim * self.dim, entries);
        self.mul.apply(&ab)
    }

    /// Check every Hopf-algebra axiom, reporting all violations by name.
    pub fn verify(&self) -> Result<()> {
        let n = self.dim;
        let id = SparseMatrix::identity(self.field, n);
        let unit_m = self.unit_matrix();
        let swap_mid = tensor_permutation(self.field, &[n, n, n, n], &[0, 2, 1, 3]);
        let mut violations = Vec::new();
        let mut check = |name: &str, lhs: &SparseMatrix, rhs: &SparseMatrix| {
            if lhs != rhs {
                violations.push(name.to_string());
            }
        };

        // Algebra axioms.
        check(
            "multiplication is associative",
            &self.mul.mul(&self.mul.kron(&id)),
            &self.mul.mul(&id.kron(&self.mul)),
        );
        check(
            "unit is a left unit",
            &self.mul.mul(&unit_m.kron(&id)),
            &id,
        );
        check(
            "unit is a right unit",
            &self.mul.mul(&id.kron(&unit_m)),
            &id,
        );

        // Coalgebra axioms.
        check(
            "comultiplication is coassociative",
            &self.comul.kron(&id).mul(&self.comul),
            &id.kron(&self.comul).mul(&self.comul),
        );
        check(
            "counit is a left counit",
            &self.counit.kron(&id).mul(&self.comul),
            &id,
        );
        check(
            "counit is a right counit",
            &id.kron(&self.counit).mul(&self.comul),
            &id,
        );

        // Bialgebra compatibility.
        check(
            "comultiplication is an algebra map",
            &self.comul.mul(&self.mul),
            &self
                .mul
                .kron(&self.mul)
                .mul(&swap_mid)
                .mul(&self.comul.kron(&self.comul)),
        );
        check(
            "counit is an algebra map",
            &self.counit.mul(&self.mul),
            &self.counit.kron(&self.counit),
        );
        check(
            "comultiplication preserves the unit",
            &self.comul.mul(&unit_m),
            &unit_m.kron(&unit_m),
        );
        check(
            "counit maps the unit to 1",
            &self.counit.mul(&unit_m),
            &SparseMatrix::identity(self.field, 1),
        );

        // Antipode axioms.
        let eta_eps = unit_m.mul(&self.counit);
        check(
            "antipode is a left convolution inverse",
            &self.mul.mul(&self.antipode.kron(&id)).mul(&self.comul),
            &eta_eps,
        );
        check(
            "antipode is a right convolution inverse",
            &self.mul.mul(&id.kron(&self.antipode)).mul(&self.comul),
            &eta_eps,
        );
        check(
            "antipode inverse is correct",
            &self.antipode.mul(&self.antipode_inv),
            &id,
        );

        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Verification(violations))
        }
    }

    /// Structural equality of all structure constants (names may differ).
    pub fn same_structure(&self, other: &HopfAlgebra) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.mul == other.mul
            && self.unit == other.unit
            && self.comul == other.comul
            && self.counit == other.counit
            && self.antipode == other.antipode
    }

    /// The dual Hopf algebra on the dual basis: multiplication is the
    /// transpose of comultiplication, and so on.
    pub fn dual(&self) -> Result<HopfRef> {
        let counit_as_vec = self.counit.row_vec(0);
        let unit_as_row = SparseMatrix::from_row_vecs(self.field, self.dim, &[self.unit.clone()]);
        HopfAlgebra::new_unverified(
            self.field,
            &format!("dual({})", self.name),
            self.comul.transpose(),
            counit_as_vec,
            self.mul.transpose(),
            unit_as_row,
            self.antipode.transpose(),
        )
    }

    /// The opposite Hopf algebra: reversed multiplication, inverted antipode.
    pub fn opposite(&self) -> Result<HopfRef> {
        let n = self.dim;
        let swap = tensor_permutation(self.field, &[n, n], &[1, 0]);
        HopfAlgebra::new_unverified(
            self.field,
            &format!("op({})", self.name),
            self.mul.mul(&swap),
            self.unit.clone(),
            self.comul.clone(),
            self.counit.clone(),
            self.antipode_inv.clone(),
        )
    }
}

/// The multiplication table of the cyclic group of order `k` (index of the
/// product of elements `i` and `j` is `(i + j) mod k`).
pub fn cyclic_group_table(k: usize) -> Vec<Vec<usize>> {
    (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect()
}

/// The multiplication table of the symmetric group on three letters, with
/// permutations of `{0,1,2}` enumerated in lexicographic one-line order.
pub fn symmetric_group_s3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    // (a ∘ b)(x) = a(b(x))
                    let c = [a[b[0]], a[b[1]], a[b[2]]];
                    index(&c)
                })
                .collect()
        })
        .collect()
}

/// The group algebra of a finite group given by its multiplication table,
/// with the group-like coalgebra structure. The table is validated: closure,
/// a two-sided identity, associativity and inverses are all checked.
pub fn group_algebra(field: Field, name: &str, table: &[Vec<usize>]) -> Result<HopfRef> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroup(format!("row {i} has length {}", row.len())));
        }
        for &v in row {
            if v >= n {
                return Err(Error::NotAGroup(format!("entry {v} out of range in row {i}")));
            }
        }
    }
    // Two-sided identity.
    let identity = (0..n)
        .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
        .ok_or_else(|| Error::NotAGroup("no two-sided identity element".into()))?;
    // Associativity.
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails on ({a},{b},{c})"
                    )));
                }
            }
        }
    }
    // Inverses.
    let mut inverse = vec![None; n];
    for g in 0..n {
        for h in 0..n {
            if table[g][h] == identity && table[h][g] == identity {
                inverse[g] = Some(h);
                break;
            }
        }
        if inverse[g].is_none() {
            return Err(Error::NotAGroup(format!("element {g} has no inverse")));
        }
    }

    let mul = SparseMatrix::from_triplets(
        field,
        n,
        n * n,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (table[i][j], i * n + j, field.one()))
            .collect::<Vec<_>>(),
    );
    let unit = SparseVec::unit(field, n, identity);
    let comul = SparseMatrix::from_triplets(
        field,
        n * n,
        n,
        (0..n).map(|g| (g * n + g, g, field.one())).collect::<Vec<_>>(),
    );
    let counit = SparseMatrix::from_triplets(
        field,
        1,
        n,
        (0..n).map(|g| (0, g, field.one())).collect::<Vec<_>>(),
    );
    let antipode = SparseMatrix::from_triplets(
        field,
        n,
        n,
        (0..n)
            .map(|g| (inverse[g].unwrap(), g, field.one()))
            .collect::<Vec<_>>(),
    );
    HopfAlgebra::new_unverified(field, name, mul, unit, comul, counit, antipode)
}

/// Sweedler's four-dimensional Hopf algebra, on the basis `{1, g, x, gx}`
/// with `g² = 1`, `x² = 0`, `xg = -gx`, `Δx = x⊗1 + g⊗x`. Needs
/// characteristic different from 2.
pub fn sweedler_h4(field: Field) -> Result<HopfRef> {
    if field.characteristic() == 2 {
        return Err(Error::BadFieldForConstruction(2));
    }
    let minus_one = field.from_i64(-1);
    taft(field, 2, &minus_one).map(|h| {
        // Re-wrap with the traditional name; the structure is Taft at q = -1.
        Arc::new(HopfAlgebra {
            name: "sweedler_h4".into(),
            field: h.field,
            dim: h.dim,
            mul: h.mul.clone(),
            unit: h.unit.clone(),
            comul: h.comul.clone(),
            counit: h.counit.clone(),
            antipode: h.antipode.clone(),
            antipode_inv: h.antipode_inv.clone(),
            comul_cache: RwLock::new(BTreeMap::new()),
            mul_cache: RwLock::new(BTreeMap::new()),
        })
    })
}

/// The smallest primitive `n`-th root of unity in the field, if one exists.
pub fn smallest_primitive_root(field: Field, n: usize) -> Result<Scalar> {
    let not_found = || Error::NotPrimitiveRoot {
        value: "none".into(),
        order: n,
        field: field.to_string(),
    };
    if n == 0 {
        return Err(not_found());
    }
    match field.characteristic() {
        0 => match n {
            1 => Ok(field.one()),
            2 => Ok(field.from_i64(-1)),
            _ => Err(not_found()),
        },
        p => {
            for v in 1..p {
                let q = field.from_i64(v as i64);
                if is_primitive_root(&field, &q, n) {
                    return Ok(q);
                }
            }
            Err(not_found())
        }
    }
}

fn is_primitive_root(field: &Field, q: &Scalar, n: usize) -> bool {
    if q.is_zero() {
        return false;
    }
    let mut pow = field.one();
    for k in 1..=n {
        pow = pow.mul(q);
        if pow.is_one() {
            return k == n;
        }
    }
    false
}

/// The Taft algebra of dimension `n²`: generators `g` (group-like of order
/// `n`) and `x` (with `Δx = x⊗1 + g⊗x`), relations `gⁿ = 1`, `xⁿ = 0`,
/// `xg = q·gx` for a primitive `n`-th root of unity `q`. Basis `gⁱxʲ` at
/// index `j·n + i`.
pub fn taft(field: Field, n: usize, q: &Scalar) -> Result<HopfRef> {
    if n < 2 {
        return Err(Error::Invalid("taft needs n ≥ 2".into()));
    }
    if q.field() != field {
        return Err(Error::AlgebraMismatch);
    }
    if !is_primitive_root(&field, q, n) {
        return Err(Error::NotPrimitiveRoot {
            value: q.to_canonical_string(),
            order: n,
            field: field.to_string(),
        });
    }
    let dim = n * n;
    let idx = |i: usize, j: usize| j * n + i; // g^i x^j
    // Powers of q, up to exponent (n-1)² and a bit beyond.
    let mut qpow = vec![field.one()];
    for _ in 1..=(n * n) {
        qpow.push(qpow.last().unwrap().mul(q));
    }

    // Multiplication: (g^i x^j)(g^k x^l) = q^{jk} g^{i+k mod n} x^{j+l}, zero when j+l ≥ n.
    let mut mul_triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if j + l >= n {
                        continue;
                    }
                    let col = idx(i, j) * dim + idx(k, l);
                    let row = idx((i + k) % n, j + l);
                    mul_triplets.push((row, col, qpow[j * k].clone()));
                }
            }
        }
    }
    let mul = SparseMatrix::from_triplets(field, dim, dim * dim, mul_triplets);
    let unit = SparseVec::unit(field, dim, idx(0, 0));

    // Products in A ⊗ A, needed to extend Δ multiplicatively.
    let tensor_product = |a: &SparseVec, b: &SparseVec| -> SparseVec {
        // (a1⊗a2)·(b1⊗b2) componentwise via mul on each leg.
        let mut entries = Vec::new();
        for (ia, va) in a.entries() {
            let (a1, a2) = (ia / dim, ia % dim);
            for (ib, vb) in b.entries() {
                let (b1, b2) = (ib / dim, ib % dim);
                let c = va.mul(vb);
                let left = mul.apply(&SparseVec::unit(field, dim * dim, a1 * dim + b1));
                let right = mul.apply(&SparseVec::unit(field, dim * dim, a2 * dim + b2));
                for (l, vl) in left.entries() {
                    for (r, vr) in right.entries() {
                        entries.push((l * dim + r, c.mul(vl).mul(vr)));
                    }
                }
            }
        }
        SparseVec::from_entries(field, dim * dim, entries)
    };

    // Δ on generators, extended multiplicatively to the basis.
    let one_one = SparseVec::unit(field, dim * dim, idx(0, 0) * dim + idx(0, 0));
    let dg = SparseVec::unit(field, dim * dim, idx(1, 0) * dim + idx(1, 0));
    let dx = SparseVec::from_entries(
        field,
        dim * dim,
        [
            (idx(0, 1) * dim + idx(0, 0), field.one()), // x ⊗ 1
            (idx(1, 0) * dim + idx(0, 1), field.one()), // g ⊗ x
        ],
    );
    let mut dg_pows = vec![one_one.clone()];
    for _ in 1..n {
        dg_pows.push(tensor_product(dg_pows.last().unwrap(), &dg));
    }
    let mut dx_pows = vec![one_one.clone()];
    for _ in 1..n {
        dx_pows.push(tensor_product(dx_pows.last().unwrap(), &dx));
    }
    let comul_cols: Vec<SparseVec> = {
        let mut cols = vec![SparseVec::zero(field, dim * dim); dim];
        for i in 0..n {
            for j in 0..n {
                cols[idx(i, j)] = tensor_product(&dg_pows[i], &dx_pows[j]);
            }
        }
        cols
    };
    let comul = SparseMatrix::from_col_vecs(field, dim * dim, &comul_cols);

    // ε(g^i x^j) = δ_{j,0}.
    let counit = SparseMatrix::from_triplets(
        field,
        1,
        dim,
        (0..n).map(|i| (0, idx(i, 0), field.one())).collect::<Vec<_>>(),
    );

    // S(g) = g^{n-1}, S(x) = -g^{n-1} x, extended anti-multiplicatively:
    // S(g^i x^j) = S(x)^j · S(g)^i.
    let sg = SparseVec::unit(field, dim, idx(n - 1, 0));
    let sx = SparseVec::from_entries(
        field,
        dim,
        [(idx(n - 1, 1), field.from_i64(-1))],
    );
    let alg_product = |a: &SparseVec, b: &SparseVec| -> SparseVec {
        let mut entries = Vec::new();
        for (ia, va) in a.entries() {
            for (ib, vb) in b.entries() {
                let prod = mul.apply(&SparseVec::unit(field, dim * dim, ia * dim + ib));
                for (k, vk) in prod.entries() {
                    entries.push((*k, va.mul(vb).mul(vk)));
                }
            }
        }
        SparseVec::from_entries(field, dim, entries)
    };
    let unit_elt = SparseVec::unit(field, dim, idx(0, 0));
    let mut sg_pows = vec![unit_elt.clone()];
    for _ in 1..n {
        sg_pows.push(alg_product(sg_pows.last().unwrap(), &sg));
    }
    let mut sx_pows = vec![unit_elt.clone()];
    for _ in 1..n {
        sx_pows.push(alg_product(sx_pows.last().unwrap(), &sx));
    }
    let antipode_cols: Vec<SparseVec> = {
        let mut cols = vec![SparseVec::zero(field, dim); dim];
        for i in 0..n {
            for j in 0..n {
                cols[idx(i, j)] = alg_product(&sx_pows[j], &sg_pows[i]);
            }
        }
        cols
    };
    let antipode = SparseMatrix::from_col_vecs(field, dim, &antipode_cols);

    HopfAlgebra::new_unverified(
        field,
        &format!("taft{n}"),
        mul,
        unit,
        comul,
        counit,
        antipode,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn group_algebras_verify() {
        for (name, table) in [
            ("kZ2", cyclic_group_table(2)),
            ("kZ3", cyclic_group_table(3)),
            ("kS3", symmetric_group_s3_table()),
            ("trivial", cyclic_group_table(1)),
        ] {
            for field in [Field::rationals(), f(2), f(3), f(5)] {
                let h = group_algebra(field, name, &table).unwrap();
                h.verify().unwrap();
            }
        }
    }

    #[test]
    fn bad_group_tables_are_rejected() {
        // Not associative: a "table" with a stray entry.
        let mut t = cyclic_group_table(3);
        t[1][1] = 1; // now 1·1 = 1 and the identity law/associativity break
        assert!(matches!(
            group_algebra(Field::rationals(), "broken", &t),
            Err(Error::NotAGroup(_))
        ));
        // Out-of-range entry.
        let t = vec![vec![0, 1], vec![1, 5]];
        assert!(group_algebra(Field::rationals(), "broken", &t).is_err());
        // No identity: constant table.
        let t = vec![vec![0, 0], vec![0, 0]];
        assert!(group_algebra(Field::rationals(), "broken", &t).is_err());
    }

    #[test]
    fn s3_table_is_a_group_of_order_six() {
        let t = symmetric_group_s3_table();
        assert_eq!(t.len(), 6);
        // Noncommutative: some pair with ab ≠ ba.
        let noncomm = (0..6).any(|a| (0..6).any(|b| t[a][b] != t[b][a]));
        assert!(noncomm);
    }

    #[test]
    fn sweedler_verifies_and_has_order_four_antipode() {
        for field in [Field::rationals(), f(3), f(5), f(7)] {
            let h = sweedler_h4(field).unwrap();
            h.verify().unwrap();
            assert_eq!(h.dim(), 4);
            // S² is conjugation by g: S²(x) = -x ≠ x, S⁴ = id.
            let s2 = h.antipode().mul(h.antipode());
            let s4 = s2.mul(&s2);
            assert_ne!(s2, SparseMatrix::identity(field, 4));
            assert_eq!(s4, SparseMatrix::identity(field, 4));
            // S²(x) = -x at index 2.
            let x = SparseVec::unit(field, 4, 2);
            assert_eq!(s2.apply(&x), x.neg());
        }
        assert!(sweedler_h4(f(2)).is_err());
    }

    #[test]
    fn taft_at_minus_one_is_sweedler() {
        let field = f(5);
        let q = field.from_i64(-1);
        let t = taft(field, 2, &q).unwrap();
        let h = sweedler_h4(field).unwrap();
        assert!(t.same_structure(&h));
    }

    #[test]
    fn taft3_verifies_over_f7() {
        let field = f(7);
        let q = smallest_primitive_root(field, 3).unwrap();
        assert_eq!(q, field.from_i64(2));
        let h = taft(field, 3, &q).unwrap();
        assert_eq!(h.dim(), 9);
        h.verify().unwrap();
        // S has order 2n = 6 on the Taft algebra (S² is conjugation by g).
        let mut s_pow = SparseMatrix::identity(field, 9);
        let mut order = 0;
        for k in 1..=12 {
            s_pow = s_pow.mul(h.antipode());
            if s_pow == SparseMatrix::identity(field, 9) {
                order = k;
                break;
            }
        }
        assert_eq!(order, 6);
    }

    #[test]
    fn taft_rejects_non_primitive_roots() {
        let field = f(7);
        let one = field.one();
        assert!(taft(field, 3, &one).is_err());
        // 6 = -1 has order 2, not 3.
        assert!(taft(field, 3, &field.from_i64(6)).is_err());
        // No cube roots of unity in F5.
        assert!(smallest_primitive_root(f(5), 3).is_err());
        // Over Q only n = 2 works.
        assert!(smallest_primitive_root(Field::rationals(), 3).is_err());
        let m1 = smallest_primitive_root(Field::rationals(), 2).unwrap();
        assert!(taft(Field::rationals(), 2, &m1).is_ok());
    }

    #[test]
    fn verify_detects_a_broken_structure_constant() {
        let field = Field::rationals();
        let h = group_algebra(field, "kZ2", &cyclic_group_table(2)).unwrap();
        // Corrupt the comultiplication: send g to g ⊗ 1 instead of g ⊗ g.
        let bad_comul = SparseMatrix::from_triplets(
            field,
            4,
            2,
            vec![(0, 0, field.one()), (2, 1, field.one())],
        );
        let bad = HopfAlgebra::new_unverified(
            field,
            "broken",
            h.mul().clone(),
            h.unit().clone(),
            bad_comul,
            h.counit().clone(),
            h.antipode().clone(),
        )
        .unwrap();
        let err = bad.verify().unwrap_err();
        match err {
            Error::Verification(v) => {
                assert!(v.iter().any(|s| s.contains("counit")));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dual_and_opposite_verify() {
        let field = f(3);
        let h = group_algebra(field, "kS3", &symmetric_group_s3_table()).unwrap();
        let d = h.dual().unwrap();
        d.verify().unwrap();
        assert_eq!(d.dim(), 6);
        let o = h.opposite().unwrap();
        o.verify().unwrap();
        // Dual of the dual is the original.
        assert!(d.dual().unwrap().same_structure(&h));
        // The dual of a noncommutative group algebra is noncocommutative,
        // hence its multiplication (pointwise) is commutative.
        let swap = tensor_permutation(field, &[6, 6], &[1, 0]);
        assert_eq!(d.mul().mul(&swap), *d.mul());
        assert_ne!(h.mul().mul(&swap), *h.mul());
        // Sweedler is self-dual: same dimension and the dual verifies.
        let s = sweedler_h4(field).unwrap();
        s.dual().unwrap().verify().unwrap();
    }

    #[test]
    fn iterated_structure_maps() {
        let field = Field::rationals();
        let h = group_algebra(field, "kZ3", &cyclic_group_table(3)).unwrap();
        // Δ^(2) of a group-like is the triple diagonal.
        let d2 = h.iterated_comul(2);
        assert_eq!(d2.nrows(), 27);
        let g = SparseVec::unit(field, 3, 1);
        let img = d2.apply(&g);
        assert_eq!(img, SparseVec::unit(field, 27, 1 * 9 + 1 * 3 + 1));
        // m^(2)(g ⊗ g ⊗ g) = g³ = 1.
        let m2 = h.iterated_mul(2);
        assert_eq!(m2.apply(&img), SparseVec::unit(field, 3, 0));
        // Both parenthesizations of Δ^(3) agree (coassociativity, iterated).
        let id = SparseMatrix::identity(field, 3);
        let left = h.comul().kron(&id).kron(&id).mul(&d2);
        let right = id.kron(&id).kron(h.comul()).mul(&d2);
        assert_eq!(left, h.iterated_comul(3));
        assert_eq!(left, right);
    }

    #[test]
    fn product_helper_matches_tables() {
        let field = f(5);
        let h = sweedler_h4(field).unwrap();
        // (gx)·g = -x: indices gx = 3, g = 1, x = 2.
        let gx = SparseVec::unit(field, 4, 3);
        let g = SparseVec::unit(field, 4, 1);
        let result = h.product(&gx, &g);
        assert_eq!(result, SparseVec::unit(field, 4, 2).neg());
    }
}
