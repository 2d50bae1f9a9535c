//! Complex characters with exact cyclotomic values.
//!
//! Irreducible characters are computed with Dixon's method: the class
//! multiplication matrices are simultaneously diagonalized over a prime field
//! `F_p` with `p ≡ 1 (mod exponent)`, and each character value is lifted to
//! `Q(ζ_e)` from the multiplicities of the eigenvalues of `ρ(g)`, which are
//! small non-negative integers recoverable from their residues.

use std::cmp::Reverse;
use std::sync::Arc;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{prime_factors, FiniteGroup, Subgroup, DEFAULT_MAX_ORDER};
use crate::scalar::Scalar;

#[derive(Clone)]
pub struct Character<T> {
    group: Arc<FiniteGroup>,
    values: Vec<Cyclotomic<T>>,
}

impl<T: Scalar> Character<T> {
    /// A class function from one value per conjugacy class.
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Cyclotomic<T>>) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::InvalidParameter(format!(
                "expected {} class values, got {}",
                group.num_classes(),
                values.len()
            )));
        }
        Ok(Self { group, values })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let e = group.exponent();
        let values = vec![Cyclotomic::one(e); group.num_classes()];
        Self { group, values }
    }

    /// Character of the regular representation.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let e = group.exponent();
        let mut values = vec![Cyclotomic::zero(e); group.num_classes()];
        values[0] = Cyclotomic::from_int(e, group.order() as i64);
        Self { group, values }
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let e = group.exponent();
        let values = vec![Cyclotomic::zero(e); group.num_classes()];
        Self { group, values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic<T>] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic<T> {
        &self.values[class]
    }

    /// Value at an element index.
    pub fn at(&self, element: usize) -> &Cyclotomic<T> {
        &self.values[self.group.class_of(element)]
    }

    /// Value at the identity, when it is an integer.
    pub fn degree(&self) -> Option<i64> {
        self.values[0].to_integer()
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn map(&self, f: impl Fn(&Cyclotomic<T>) -> Cyclotomic<T>) -> Self {
        Self {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(Cyclotomic::conj)
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|v| v.scale(factor))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        Ok(Self {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Pointwise product, the character of the tensor product.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        Ok(Self {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `g ↦ χ(g^k)`.
    pub fn power(&self, k: i64) -> Self {
        let map = self.group.power_class_map(k);
        Self {
            group: self.group.clone(),
            values: map.iter().map(|&c| self.values[c].clone()).collect(),
        }
    }

    /// `(1/|G|) Σ_g χ(g) conj(ψ(g))`.
    pub fn inner_product(&self, other: &Self) -> Result<Cyclotomic<T>> {
        self.check_same_group(other)?;
        let e = self.values[0].conductor();
        let mut acc = Cyclotomic::zero(e);
        for (class, (a, b)) in self
            .group
            .conjugacy_classes()
            .iter()
            .zip(self.values.iter().zip(&other.values))
        {
            let term = (a * &b.conj()).scale(&T::from_int(class.size() as i64));
            acc = &acc + &term;
        }
        Ok(acc.scale(&T::from_ratio(1, self.group.order() as i64)))
    }

    /// Inner product that must be a non-negative integer.
    pub fn multiplicity(&self, other: &Self) -> Result<u64> {
        let ip = self.inner_product(other)?;
        as_count(&ip)
    }

    /// `S²χ(g) = (χ(g)² + χ(g²)) / 2`.
    pub fn symmetric_square(&self) -> Self {
        let squares = self.power(2);
        let half = T::from_ratio(1, 2);
        Self {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&squares.values)
                .map(|(v, sq)| (&(v * v) + sq).scale(&half))
                .collect(),
        }
    }

    /// `Λ²χ(g) = (χ(g)² − χ(g²)) / 2`.
    pub fn antisymmetric_square(&self) -> Self {
        let squares = self.power(2);
        let half = T::from_ratio(1, 2);
        Self {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&squares.values)
                .map(|(v, sq)| (&(v * v) - sq).scale(&half))
                .collect(),
        }
    }

    /// `dim V^H = (1/|H|) Σ_{h∈H} χ(h)`.
    pub fn fixed_space_dimension(&self, h: &Subgroup) -> Result<u64> {
        if !self.group.owns(h) {
            return Err(Error::SubgroupMismatch);
        }
        let e = self.values[0].conductor();
        let mut counts = vec![0i64; self.values.len()];
        for &x in h.elements() {
            counts[self.group.class_of(x)] += 1;
        }
        let mut acc = Cyclotomic::zero(e);
        for (v, &c) in self.values.iter().zip(&counts) {
            if c != 0 {
                acc = &acc + &v.scale(&T::from_int(c));
            }
        }
        as_count(&acc.scale(&T::from_ratio(1, h.order() as i64)))
    }
}

impl<T: Scalar> PartialEq for Character<T> {
    fn eq(&self, other: &Self) -> bool {
        self.check_same_group(other).is_ok() && self.values == other.values
    }
}

impl<T: Scalar> std::fmt::Debug for Character<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.values).finish()
    }
}

pub(crate) fn as_count<T: Scalar>(z: &Cyclotomic<T>) -> Result<u64> {
    match z.to_integer() {
        Some(n) if n >= 0 => Ok(n as u64),
        _ => Err(Error::NonIntegralResult(z.to_string())),
    }
}

#[derive(Clone)]
pub struct CharacterTable<T> {
    group: Arc<FiniteGroup>,
    irreducibles: Vec<Character<T>>,
}

impl<T: Scalar> CharacterTable<T> {
    pub fn compute(group: Arc<FiniteGroup>) -> Result<Self> {
        Self::compute_bounded(group, DEFAULT_MAX_ORDER)
    }

    pub fn compute_bounded(group: Arc<FiniteGroup>, max_order: usize) -> Result<Self> {
        if group.order() > max_order {
            return Err(Error::GroupTooLarge { bound: max_order });
        }
        let rows = dixon::irreducible_rows(&group)?;
        let e = group.exponent();
        let irreducibles = rows
            .into_iter()
            .map(|row| {
                let values = row
                    .iter()
                    .map(|terms| {
                        Cyclotomic::from_exponents(
                            e,
                            terms
                                .iter()
                                .enumerate()
                                .filter(|(_, &m)| m != 0)
                                .map(|(k, &m)| (k as i64, T::from_int(m as i64))),
                        )
                    })
                    .collect();
                Character {
                    group: group.clone(),
                    values,
                }
            })
            .collect();
        Ok(Self {
            group,
            irreducibles,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreducibles(&self) -> &[Character<T>] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irreducibles
            .iter()
            .map(|c| c.degree().unwrap_or_default() as u64)
            .collect()
    }

    /// Index of the complex conjugate of each irreducible.
    pub fn conjugate_indices(&self) -> Vec<usize> {
        self.irreducibles
            .iter()
            .map(|chi| {
                let c = chi.conj();
                self.irreducibles
                    .iter()
                    .position(|psi| *psi == c)
                    .expect("conjugate of an irreducible is irreducible")
            })
            .collect()
    }

    /// `Σ n_i χ_i`.
    pub fn combine(&self, multiplicities: &[u64]) -> Character<T> {
        let mut acc = Character::zero(self.group.clone());
        for (chi, &n) in self.irreducibles.iter().zip(multiplicities) {
            if n > 0 {
                acc = acc
                    .add(&chi.scale(&T::from_int(n as i64)))
                    .expect("same group");
            }
        }
        acc
    }

    /// Multiplicity of each irreducible in a character.
    pub fn decompose(&self, chi: &Character<T>) -> Result<Vec<u64>> {
        self.irreducibles
            .iter()
            .map(|psi| chi.multiplicity(psi))
            .collect()
    }
}

mod dixon {
    use super::*;

    /// For each irreducible, for each class: the multiplicity of `ζ_e^k` as an
    /// eigenvalue of `ρ(g)`, indexed by `k` in `0..e`.
    pub(super) fn irreducible_rows(group: &FiniteGroup) -> Result<Vec<Vec<Vec<u64>>>> {
        let n = group.order() as u64;
        let e = group.exponent();
        let k = group.num_classes();
        let p = choose_prime(e, n);
        let f = Fp(p);
        let zeta = f.primitive_root_of_unity(e);

        let sizes: Vec<u64> = group
            .conjugacy_classes()
            .iter()
            .map(|c| c.size() as u64)
            .collect();
        let inverse_class: Vec<usize> = group
            .conjugacy_classes()
            .iter()
            .map(|c| group.class_of(group.inv(c.representative())))
            .collect();

        let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
            .map(|i| {
                let mut v = vec![0; k];
                v[i] = 1;
                v
            })
            .collect()];
        for j in 1..k {
            if spaces.iter().all(|s| s.len() == 1) {
                break;
            }
            let a = class_matrix(group, j);
            let roots = f.roots(&f.charpoly(&a));
            let mut next = Vec::new();
            for space in spaces {
                if space.len() == 1 {
                    next.push(space);
                    continue;
                }
                let mut total = 0;
                for &lambda in &roots {
                    // (A - λ) V c = 0
                    let shifted: Vec<Vec<u64>> = (0..k)
                        .map(|r| {
                            space
                                .iter()
                                .map(|v| {
                                    let av =
                                        (0..k).fold(0, |acc, s| f.add(acc, f.mul(a[r][s], v[s])));
                                    f.sub(av, f.mul(lambda, v[r]))
                                })
                                .collect()
                        })
                        .collect();
                    let kernel = f.nullspace(&shifted, space.len());
                    if kernel.is_empty() {
                        continue;
                    }
                    total += kernel.len();
                    let sub: Vec<Vec<u64>> = kernel
                        .iter()
                        .map(|c| {
                            (0..k)
                                .map(|r| {
                                    space
                                        .iter()
                                        .zip(c)
                                        .fold(0, |acc, (v, &ci)| f.add(acc, f.mul(v[r], ci)))
                                })
                                .collect()
                        })
                        .collect();
                    next.push(sub);
                }
                if total != space.len() {
                    return Err(Error::InvalidParameter(
                        "class matrices are not simultaneously diagonalizable mod p".into(),
                    ));
                }
            }
            spaces = next;
        }
        if spaces.len() != k {
            return Err(Error::InvalidParameter(format!(
                "found {} characters for {k} classes",
                spaces.len()
            )));
        }

        let max_degree = (n as f64).sqrt() as u64 + 1;
        let power_classes: Vec<Vec<usize>> = group
            .conjugacy_classes()
            .iter()
            .map(|c| {
                let g = c.representative();
                let mut out = Vec::with_capacity(c.order() as usize);
                let mut x = 0;
                for _ in 0..c.order() {
                    out.push(group.class_of(x));
                    x = group.mul(x, g);
                }
                out
            })
            .collect();

        let mut rows = Vec::with_capacity(k);
        for space in spaces {
            let v = &space[0];
            let w: Vec<u64> = {
                let s = f.inv(v[0]);
                v.iter().map(|&x| f.mul(x, s)).collect()
            };
            // χ(1)^2 Σ_r ω_r ω_{r'} / |C_r| = |G|
            let sum = (0..k).fold(0, |acc, r| {
                f.add(
                    acc,
                    f.mul(f.mul(w[r], w[inverse_class[r]]), f.inv(sizes[r] % p)),
                )
            });
            let target = f.mul(n % p, f.inv(sum));
            let degree = (1..=max_degree)
                .find(|&d| f.mul(d, d) == target)
                .ok_or_else(|| Error::InvalidParameter("no degree fits".into()))?;
            let values: Vec<u64> = (0..k)
                .map(|r| f.mul(f.mul(w[r], degree), f.inv(sizes[r] % p)))
                .collect();

            let mut row = Vec::with_capacity(k);
            for (r, class) in group.conjugacy_classes().iter().enumerate() {
                let o = class.order();
                let step = e / o;
                let zeta_o = f.pow(zeta, step);
                let inv_o = f.inv(o % p);
                let mut terms = vec![0u64; e as usize];
                for kk in 0..o {
                    let mut acc = 0;
                    for j in 0..o {
                        let c = power_classes[r][j as usize];
                        let exp = (o - (j * kk) % o) % o;
                        acc = f.add(acc, f.mul(values[c], f.pow(zeta_o, exp)));
                    }
                    let m = f.mul(acc, inv_o);
                    if m > degree {
                        return Err(Error::InvalidParameter(format!(
                            "eigenvalue multiplicity residue {m} exceeds degree {degree}"
                        )));
                    }
                    terms[(kk * step) as usize] = m;
                }
                row.push(terms);
            }
            rows.push((degree, row));
        }
        rows.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| Reverse(&a.1).cmp(&Reverse(&b.1)))
        });
        let total: u64 = rows.iter().map(|(d, _)| d * d).sum();
        if total != n {
            return Err(Error::InvalidParameter(format!(
                "sum of squared degrees {total} differs from group order {n}"
            )));
        }
        Ok(rows.into_iter().map(|(_, r)| r).collect())
    }

    /// `(A_j)[s][r] = #{x ∈ C_j : x^-1 g_r ∈ C_s}` for class representatives `g_r`.
    fn class_matrix(group: &FiniteGroup, j: usize) -> Vec<Vec<u64>> {
        let k = group.num_classes();
        let mut a = vec![vec![0u64; k]; k];
        let classes = group.conjugacy_classes();
        for (r, cr) in classes.iter().enumerate() {
            let g = cr.representative();
            for &x in classes[j].members() {
                let s = group.class_of(group.mul(group.inv(x), g));
                a[s][r] += 1;
            }
        }
        a
    }

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    /// Least prime `p ≡ 1 (mod e)` with `p > 2 sqrt(n)`.
    fn choose_prime(e: u64, n: u64) -> u64 {
        let mut p = e + 1;
        loop {
            if p * p > 4 * n && is_prime(p) {
                return p;
            }
            p += e;
        }
    }

    #[derive(Clone, Copy)]
    pub(super) struct Fp(pub u64);

    impl Fp {
        pub fn add(self, a: u64, b: u64) -> u64 {
            (a + b) % self.0
        }

        pub fn sub(self, a: u64, b: u64) -> u64 {
            (a + self.0 - b % self.0) % self.0
        }

        pub fn mul(self, a: u64, b: u64) -> u64 {
            ((a as u128 * b as u128) % self.0 as u128) as u64
        }

        pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
            let mut acc = 1 % self.0;
            base %= self.0;
            while exp > 0 {
                if exp & 1 == 1 {
                    acc = self.mul(acc, base);
                }
                base = self.mul(base, base);
                exp >>= 1;
            }
            acc
        }

        pub fn inv(self, a: u64) -> u64 {
            debug_assert!(a % self.0 != 0);
            self.pow(a, self.0 - 2)
        }

        pub fn primitive_root_of_unity(self, e: u64) -> u64 {
            let p = self.0;
            let primes = prime_factors(e);
            (2..p)
                .map(|x| self.pow(x, (p - 1) / e))
                .find(|&z| primes.iter().all(|&q| self.pow(z, e / q) != 1))
                .unwrap_or(1)
        }

        /// Characteristic polynomial, lowest degree first, via reduction to
        /// Hessenberg form.
        pub fn charpoly(self, a: &[Vec<u64>]) -> Vec<u64> {
            let n = a.len();
            let mut h: Vec<Vec<u64>> = a
                .iter()
                .map(|r| r.iter().map(|&x| x % self.0).collect())
                .collect();
            for m in 1..n.saturating_sub(1) {
                let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
                    continue;
                };
                if i != m {
                    h.swap(i, m);
                    for row in h.iter_mut() {
                        row.swap(i, m);
                    }
                }
                let pivot_inv = self.inv(h[m][m - 1]);
                for j in m + 1..n {
                    let u = self.mul(h[j][m - 1], pivot_inv);
                    if u == 0 {
                        continue;
                    }
                    for c in 0..n {
                        h[j][c] = self.sub(h[j][c], self.mul(u, h[m][c]));
                    }
                    for row in h.iter_mut() {
                        row[m] = self.add(row[m], self.mul(u, row[j]));
                    }
                }
            }
            // p_0 = 1; p_m = (x - h_mm) p_{m-1} - Σ_{i<m} h_im (Π_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
            let mut polys: Vec<Vec<u64>> = vec![vec![1]];
            for m in 0..n {
                let prev = &polys[m];
                let mut next = vec![0u64; m + 2];
                for (d, &c) in prev.iter().enumerate() {
                    next[d + 1] = self.add(next[d + 1], c);
                    next[d] = self.sub(next[d], self.mul(h[m][m], c));
                }
                let mut prod = 1;
                for i in (0..m).rev() {
                    prod = self.mul(prod, h[i + 1][i]);
                    let coef = self.mul(h[i][m], prod);
                    if coef == 0 {
                        continue;
                    }
                    for (d, &c) in polys[i].iter().enumerate() {
                        next[d] = self.sub(next[d], self.mul(coef, c));
                    }
                }
                polys.push(next);
            }
            polys.pop().expect("non-empty")
        }

        pub fn roots(self, poly: &[u64]) -> Vec<u64> {
            (0..self.0)
                .filter(|&x| {
                    poly.iter()
                        .rev()
                        .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
                        == 0
                })
                .collect()
        }

        /// Basis of `{c : M c = 0}` for a `rows × cols` matrix.
        pub fn nullspace(self, m: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
            let mut a: Vec<Vec<u64>> = m.to_vec();
            let mut pivots = Vec::new();
            let mut row = 0;
            for col in 0..cols {
                let Some(pr) = (row..a.len()).find(|&r| a[r][col] != 0) else {
                    continue;
                };
                a.swap(row, pr);
                let inv = self.inv(a[row][col]);
                for c in 0..cols {
                    a[row][c] = self.mul(a[row][c], inv);
                }
                for r in 0..a.len() {
                    if r != row && a[r][col] != 0 {
                        let factor = a[r][col];
                        for c in 0..cols {
                            a[r][c] = self.sub(a[r][c], self.mul(factor, a[row][c]));
                        }
                    }
                }
                pivots.push(col);
                row += 1;
            }
            (0..cols)
                .filter(|c| !pivots.contains(c))
                .map(|free| {
                    let mut v = vec![0u64; cols];
                    v[free] = 1;
                    for (r, &pc) in pivots.iter().enumerate() {
                        v[pc] = self.sub(0, a[r][free]);
                    }
                    v
                })
                .collect()
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn charpoly_of_small_matrix() {
            let f = Fp(13);
            // [[2,1],[1,2]] has eigenvalues 1 and 3: x^2 - 4x + 3
            let cp = f.charpoly(&[vec![2, 1], vec![1, 2]]);
            assert_eq!(cp, vec![3, 13 - 4, 1]);
            assert_eq!(f.roots(&cp), vec![1, 3]);
            let cp3 = f.charpoly(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
            assert_eq!(cp3, vec![12, 0, 0, 1]);
        }

        #[test]
        fn prime_choice() {
            assert_eq!(choose_prime(6, 24), 13);
            assert_eq!(choose_prime(2, 4), 5);
            let f = Fp(13);
            let z = f.primitive_root_of_unity(12);
            assert_eq!(f.pow(z, 12), 1);
            assert_ne!(f.pow(z, 6), 1);
            assert_ne!(f.pow(z, 4), 1);
        }
    }
}
