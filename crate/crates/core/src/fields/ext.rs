use super::linalg::{invert, mat_vec, rref, Matrix};
use super::{Field, PrimeField, Semiring};
use crate::error::{Error, Result};

/// Largest field order supported by the enumeration-based constructions.
pub const MAX_EXT_ORDER: u64 = 1 << 24;

/// `GF(p^t)` as `F_p[x] / (m(x))`.
///
/// An element is stored as the index `sum_i c_i p^i` of its coefficient vector
/// `(c_0, ..., c_{t-1})` in the power basis `1, x, ..., x^{t-1}`. The modulus
/// `m` is the first irreducible monic polynomial of degree `t` when candidates
/// are ordered by the index of their non-leading coefficients.
#[derive(Debug, Clone)]
pub struct ExtField {
    base: PrimeField,
    degree: usize,
    order: u64,
    /// Non-leading coefficients of the monic modulus.
    modulus: Vec<u64>,
    /// Discrete log / exp tables relative to a primitive element, when the
    /// field is small enough.
    tables: Option<LogTables>,
}

#[derive(Debug, Clone)]
struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

const TABLE_LIMIT: u64 = 1 << 16;

impl ExtField {
    pub fn new(p: u64, degree: usize) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if degree == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        let order = p
            .checked_pow(degree as u32)
            .filter(|&q| q <= MAX_EXT_ORDER)
            .ok_or_else(|| Error::invalid(format!("GF({p}^{degree}) too large to enumerate")))?;
        let modulus = first_irreducible(p, degree);
        let mut field = ExtField {
            base,
            degree,
            order,
            modulus,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients `c_0..c_t` of the monic modulus (leading 1 included).
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    /// Power-basis coordinates of `a`.
    pub fn digits(&self, a: u32) -> Vec<u64> {
        let p = self.base.p();
        let mut v = u64::from(a);
        (0..self.degree)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> u32 {
        let p = self.base.p();
        digits.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
    }

    /// Embeds a base-field element.
    pub fn embed(&self, a: u64) -> u32 {
        self.base.reduce(a) as u32
    }

    /// Whether `a` lies in the prime subfield.
    pub fn is_base(&self, a: u32) -> bool {
        u64::from(a) < self.base.p()
    }

    fn mul_schoolbook(&self, a: u32, b: u32) -> u32 {
        let f = &self.base;
        let t = self.degree;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * t - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        // x^t = -sum m_i x^i
        for top in (t..2 * t - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = top - t + i;
                prod[idx] = f.sub(prod[idx], f.mul(c, m));
            }
        }
        self.from_digits(&prod[..t])
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order as usize;
        let gen = (2..self.order as u32)
            .chain(std::iter::once(1))
            .find(|&g| multiplicative_order(self, g) == self.order - 1)
            .expect("finite field has a primitive element");
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp[i] = cur;
            exp[i + q - 1] = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_schoolbook(cur, gen);
        }
        LogTables { log, exp }
    }
}

fn multiplicative_order(f: &ExtField, g: u32) -> u64 {
    let mut cur = g;
    let mut ord = 1;
    while cur != 1 {
        cur = f.mul_schoolbook(cur, g);
        ord += 1;
        if ord > f.order {
            return 0;
        }
    }
    ord
}

impl Semiring for ExtField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.base.p() == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| self.base.add(x, y)).collect();
        self.from_digits(&sum)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_schoolbook(a, b),
        }
    }
    fn from_u64(&self, v: u64) -> u32 {
        self.embed(v)
    }
}

impl Field for ExtField {
    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn order(&self) -> u64 {
        self.order
    }
    fn neg(&self, a: u32) -> u32 {
        if self.base.p() == 2 {
            return a;
        }
        let d: Vec<u64> = self.digits(a).iter().map(|&x| self.base.neg(x)).collect();
        self.from_digits(&d)
    }
    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let q1 = self.order as u32 - 1;
            return Some(t.exp[((q1 - t.log[a as usize]) % q1) as usize]);
        }
        Some(self.pow(a, self.order - 2))
    }
    fn element(&self, index: u64) -> u32 {
        debug_assert!(index < self.order);
        index as u32
    }
    fn index_of(&self, a: u32) -> u64 {
        u64::from(a)
    }
}

/// Remainder of `a` modulo the monic polynomial `b` (coefficients low to high).
fn poly_rem(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &PrimeField, poly: &[u64]) -> bool {
    let p = f.p();
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut divisor: Vec<u64> = (0..d).map(|i| low / p.pow(i as u32) % p).collect();
            divisor.push(1);
            if poly_rem(f, poly, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, degree: usize) -> Vec<u64> {
    let f = PrimeField::new(p).expect("prime");
    (0..p.pow(degree as u32))
        .map(|low| {
            let mut poly: Vec<u64> = (0..degree).map(|i| low / p.pow(i as u32) % p).collect();
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(&f, poly))
        .map(|mut poly| {
            poly.pop();
            poly
        })
        .expect("irreducible polynomials exist in every degree")
}

/// An extension field together with a normal basis
/// `beta, beta^p, ..., beta^(p^(t-1))` over the prime field.
#[derive(Debug, Clone)]
pub struct ExtFieldCtx {
    pub field: ExtField,
    pub beta: u32,
    /// `conjugates[i] = beta^(p^i)`.
    pub conjugates: Vec<u32>,
    /// Column `i` holds the power-basis coordinates of `beta^(p^i)`, so this
    /// maps normal-basis coordinates to power-basis coordinates.
    pub basis_matrix: Matrix<u64>,
    pub inverse_matrix: Matrix<u64>,
}

impl ExtFieldCtx {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn base(&self) -> PrimeField {
        self.field.base()
    }

    /// `beta` as a coefficient vector in the power basis.
    pub fn beta_coeffs(&self) -> Vec<u64> {
        self.field.digits(self.beta)
    }
}

fn conjugates(field: &ExtField, beta: u32) -> Vec<u32> {
    let p = field.characteristic();
    let mut out = Vec::with_capacity(field.degree());
    let mut cur = beta;
    for _ in 0..field.degree() {
        out.push(cur);
        cur = field.pow(cur, p);
    }
    out
}

fn column_matrix(field: &ExtField, cols: &[u32]) -> Matrix<u64> {
    let t = field.degree();
    let digits: Vec<Vec<u64>> = cols.iter().map(|&c| field.digits(c)).collect();
    (0..t).map(|r| (0..t).map(|c| digits[c][r]).collect()).collect()
}

/// Deterministic normal-basis search: the first element (by index) whose
/// Frobenius conjugates are linearly independent over `F_p`.
pub fn find_normal_basis(p: u64, degree: usize) -> Result<ExtFieldCtx> {
    let field = ExtField::new(p, degree)?;
    let base = field.base();
    for beta in 1..field.order() as u32 {
        let conj = conjugates(&field, beta);
        let basis_matrix = column_matrix(&field, &conj);
        let mut scratch = basis_matrix.clone();
        if rref(&base, &mut scratch).len() < degree {
            continue;
        }
        let inverse_matrix = invert(&base, &basis_matrix).expect("full rank matrix inverts");
        return Ok(ExtFieldCtx {
            field,
            beta,
            conjugates: conj,
            basis_matrix,
            inverse_matrix,
        });
    }
    Err(Error::NoNormalBasis { p, degree })
}

/// Coordinates of `x` in the normal basis.
pub fn ext_decompose(x: u32, ctx: &ExtFieldCtx) -> Vec<u64> {
    mat_vec(&ctx.base(), &ctx.inverse_matrix, &ctx.field.digits(x))
}

/// Inverse of [`ext_decompose`].
pub fn ext_recompose(coords: &[u64], ctx: &ExtFieldCtx) -> u32 {
    ctx.field
        .from_digits(&mat_vec(&ctx.base(), &ctx.basis_matrix, coords))
}

#[cfg(test)]
mod tests {
    use super::super::linalg::mat_mul;
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn f4_structure() {
        let f = ExtField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), vec![1, 1, 1]);
        let g = 2; // the class of x
        assert_eq!(f.mul(g, g), f.add(g, 1));
        let ctx = find_normal_basis(2, 2).unwrap();
        assert_eq!(ctx.beta, g);
        assert_eq!(ctx.conjugates, vec![g, 3]);
    }

    #[test]
    fn degree_one_is_base_field() {
        let ctx = find_normal_basis(2, 1).unwrap();
        assert_eq!(ctx.beta, 1);
        assert_eq!(ctx.basis_matrix, vec![vec![1]]);
        let ctx = find_normal_basis(5, 1).unwrap();
        assert_eq!(ctx.beta, 1);
        assert_eq!(ext_decompose(3, &ctx), vec![3]);
    }

    /// Field axioms checked exhaustively on small fields, table and schoolbook
    /// multiplication compared.
    #[test]
    fn small_field_axioms() {
        for (p, t) in [(2, 3), (3, 2), (5, 2), (2, 4), (3, 3)] {
            let f = ExtField::new(p, t).unwrap();
            let q = f.order() as u32;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            // Frobenius is additive.
            for a in 0..q {
                for b in 0..q.min(20) {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
        }
    }

    #[test]
    fn normal_basis_invariants() {
        for (p, t) in [(2, 1), (2, 2), (3, 2), (2, 3), (2, 6), (5, 3), (3, 4), (2, 8)] {
            let ctx = find_normal_basis(p, t).unwrap();
            let base = ctx.base();
            let id = mat_mul(&base, &ctx.basis_matrix, &ctx.inverse_matrix);
            for (i, row) in id.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, u64::from(i == j));
                }
            }
            assert_eq!(ext_decompose(0, &ctx), vec![0; t]);
            let mut unit = vec![0; t];
            unit[0] = 1;
            assert_eq!(ext_decompose(ctx.beta, &ctx), unit);
        }
    }

    #[test]
    fn decompose_round_trip() {
        let mut rng = rng_from_seed(3);
        for (p, t) in [(3, 2), (2, 6), (7, 3), (2, 10)] {
            let ctx = find_normal_basis(p, t).unwrap();
            for _ in 0..1000 {
                let x = ctx.field.random(&mut rng);
                let coords = ext_decompose(x, &ctx);
                // Multiply-and-sum recomposition, independent of basis_matrix.
                let direct = coords.iter().zip(&ctx.conjugates).fold(0u32, |acc, (&c, &b)| {
                    ctx.field.add(acc, ctx.field.mul(ctx.field.embed(c), b))
                });
                assert_eq!(direct, x);
                assert_eq!(ext_recompose(&coords, &ctx), x);
            }
        }
    }

    #[test]
    fn large_field_uses_schoolbook() {
        let f = ExtField::new(2, 18).unwrap();
        assert!(f.tables.is_none());
        let a = 123_457;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        assert!(ExtField::new(2, 25).is_err());
    }
}
