//! Elements of `Q(ζ_e)` in the power basis `1, ζ, …, ζ^(φ(e)-1)`.
//!
//! Every value is kept reduced modulo the cyclotomic polynomial `Φ_e`, so two
//! values of the same conductor are equal exactly when their coefficient
//! vectors agree. Values of different conductors are compared after
//! embedding both into `Q(ζ_lcm)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use crate::scalar::Scalar;

/// Reduction data for one conductor.
#[derive(Debug)]
pub struct CyclotomicBasis {
    conductor: u64,
    /// `powers[k]` holds `ζ^k` in the power basis, for `0 <= k < conductor`.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicBasis {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `φ(e)`, the dimension over `Q`.
    pub fn dimension(&self) -> usize {
        self.powers[0].len()
    }

    fn build(conductor: u64) -> Self {
        let phi = cyclotomic_polynomial(conductor);
        let dim = phi.len() - 1;
        let mut powers = Vec::with_capacity(conductor as usize);
        for k in 0..conductor as usize {
            if k < dim {
                let mut v = vec![0i64; dim];
                v[k] = 1;
                powers.push(v);
            } else {
                let prev: &Vec<i64> = &powers[k - 1];
                let top = prev[dim - 1];
                let mut v = vec![0i64; dim];
                v[1..dim].copy_from_slice(&prev[..dim - 1]);
                for i in 0..dim {
                    v[i] -= top * phi[i];
                }
                powers.push(v);
            }
        }
        Self { conductor, powers }
    }
}

/// Shared reduction tables, one per conductor.
pub fn basis(conductor: u64) -> Arc<CyclotomicBasis> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicBasis>>>> = OnceLock::new();
    let conductor = conductor.max(1);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(conductor)
        .or_insert_with(|| Arc::new(CyclotomicBasis::build(conductor)))
        .clone()
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut known: HashMap<u64, Vec<i64>> = HashMap::new();
    for &d in &divisors {
        // x^d - 1 divided by Φ_c for every proper divisor c of d
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for &c in divisors.iter().take_while(|&&c| c < d) {
            if d % c == 0 {
                num = divide_exact(&num, &known[&c]);
            }
        }
        known.insert(d, num);
    }
    known.remove(&n).expect("n divides itself")
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut quot = vec![0i64; rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn] / lead;
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

#[derive(Clone)]
pub struct Cyclotomic<T> {
    basis: Arc<CyclotomicBasis>,
    coeffs: Vec<T>,
}

impl<T: Scalar> Cyclotomic<T> {
    pub fn zero(conductor: u64) -> Self {
        let basis = basis(conductor);
        let coeffs = vec![T::zero(); basis.dimension()];
        Self { basis, coeffs }
    }

    pub fn from_scalar(conductor: u64, value: T) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = value;
        z
    }

    pub fn from_int(conductor: u64, value: i64) -> Self {
        Self::from_scalar(conductor, T::from_int(value))
    }

    pub fn one(conductor: u64) -> Self {
        Self::from_int(conductor, 1)
    }

    /// `ζ_e^k`.
    pub fn root_of_unity(conductor: u64, k: i64) -> Self {
        let mut z = Self::zero(conductor);
        z.add_power(k, &T::one());
        z
    }

    /// `Σ c_k ζ_e^k` from (exponent, coefficient) pairs.
    pub fn from_exponents<I>(conductor: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
    {
        let mut z = Self::zero(conductor);
        for (k, c) in terms {
            z.add_power(k, &c);
        }
        z
    }

    fn add_power(&mut self, k: i64, c: &T) {
        if c.is_zero() {
            return;
        }
        let e = self.basis.conductor as i64;
        let row = &self.basis.powers[k.rem_euclid(e) as usize];
        for (slot, &r) in self.coeffs.iter_mut().zip(row) {
            if r != 0 {
                *slot = slot.clone() + c.clone() * T::from_int(r);
            }
        }
    }

    pub fn conductor(&self) -> u64 {
        self.basis.conductor
    }

    /// Coefficients in the power basis.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_negligible)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<T> {
        self.coeffs[1..]
            .iter()
            .all(Scalar::is_negligible)
            .then(|| self.coeffs[0].clone())
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.as_rational().and_then(|r| r.integer_value())
    }

    /// Image under `ζ ↦ ζ^k`; `k` must be prime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let e = self.conductor();
        debug_assert_eq!((k.rem_euclid(e as i64) as u64).gcd(&e), 1);
        Self::from_exponents(
            e,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 * k, c.clone())),
        )
    }

    /// Complex conjugate, `ζ ↦ ζ^-1`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    /// The same number written over a multiple of the conductor.
    pub fn embed(&self, conductor: u64) -> Self {
        let e = self.conductor();
        assert!(
            conductor % e == 0,
            "conductor {conductor} is not a multiple of {e}"
        );
        if conductor == e {
            return self.clone();
        }
        let step = (conductor / e) as i64;
        Self::from_exponents(
            conductor,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 * step, c.clone())),
        )
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = self.conductor().lcm(&other.conductor());
        (self.embed(l), other.embed(l))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other);
            return a.zip_with(&b, f);
        }
        Self {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other);
            return a.product(&b);
        }
        let dim = self.coeffs.len();
        let mut full = vec![T::zero(); 2 * dim - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[i + j] = full[i + j].clone() + a.clone() * b.clone();
            }
        }
        let mut out = Self::zero(self.conductor());
        for (k, c) in full.into_iter().enumerate() {
            if k < dim {
                out.coeffs[k] = out.coeffs[k].clone() + c;
            } else {
                out.add_power(k as i64, &c);
            }
        }
        out
    }
}

impl<T: Scalar> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl<T: Scalar> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn add(self, rhs: Self) -> Cyclotomic<T> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<T: Scalar> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<T: Scalar> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        self.product(rhs)
    }
}

impl<T: Scalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;

            fn $m(self, rhs: Self) -> Cyclotomic<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

/// `c0+c1*z^1+…` with `z` a primitive root of unity of the conductor.
impl<T: Scalar> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_negligible() {
                continue;
            }
            let mut text = c.render();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            }
            first = false;
            match (i, text.as_str()) {
                (0, _) => write!(f, "{text}")?,
                (_, "1") => write!(f, "z^{i}")?,
                _ => write!(f, "{text}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({self})", self.conductor())
    }
}
