//! Row spans over `Z/m` in Howell normal form.
//!
//! A Howell basis is an echelon basis whose pivots divide `m` and which has the
//! Howell property: every span vector whose first `k` entries vanish is a
//! combination of the rows with pivot column at least `k`. Consequently every
//! span vector is uniquely `Σ c_r · row_r` with `0 ≤ c_r < m / pivot_r`, and
//! membership is decided by a single forward reduction.

use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HowellBasis {
    modulus: u64,
    ncols: usize,
    slots: Vec<Option<Vec<u64>>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// A unit `u` of `Z/m` with `u · a ≡ gcd(a, m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = a.gcd(&m);
    let (ap, mp) = (a / g, m / g);
    let base = if mp == 1 {
        0
    } else {
        let (_, x, _) = ext_gcd(ap as i128, mp as i128);
        x.rem_euclid(mp as i128) as u64
    };
    let mut u = base;
    while u.gcd(&m) != 1 {
        u += mp;
    }
    u % m
}

impl HowellBasis {
    pub fn new(modulus: u64, ncols: usize) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        HowellBasis { modulus, ncols, slots: vec![None; ncols] }
    }

    pub fn from_rows(modulus: u64, ncols: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut b = Self::new(modulus, ncols);
        for r in rows {
            b.insert(r);
        }
        b.canonicalize();
        b
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn axpy(&self, y: &mut [u64], k: u64, x: &[u64]) {
        let m = self.modulus;
        let k = k % m;
        if k == 0 {
            return;
        }
        for (a, &b) in y.iter_mut().zip(x) {
            *a = (*a + k * b) % m;
        }
    }

    fn scaled(&self, k: u64, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&b| (k % self.modulus) * b % self.modulus).collect()
    }

    /// Adds a vector to the span.
    pub fn insert(&mut self, v: Vec<u64>) {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let m = self.modulus;
        let mut stack = vec![v.into_iter().map(|x| x % m).collect::<Vec<_>>()];
        while let Some(mut v) = stack.pop() {
            while let Some(c) = v.iter().position(|&x| x != 0) {
                let a = v[c];
                match self.slots[c].take() {
                    None => {
                        let u = normalizing_unit(a, m);
                        let row = self.scaled(u, &v);
                        let g = row[c];
                        let ann = self.scaled(m / g, &row);
                        self.slots[c] = Some(row);
                        if ann.iter().any(|&x| x != 0) {
                            stack.push(ann);
                        }
                        break;
                    }
                    Some(row) => {
                        let p = row[c];
                        if a % p == 0 {
                            self.axpy(&mut v, m - a / p, &row);
                            self.slots[c] = Some(row);
                            continue;
                        }
                        let (g, s, t) = ext_gcd(p as i128, a as i128);
                        let (s, t) = (s.rem_euclid(m as i128) as u64, t.rem_euclid(m as i128) as u64);
                        let mut new_row = self.scaled(s, &row);
                        self.axpy(&mut new_row, t, &v);
                        let g = g as u64;
                        let mut new_v = self.scaled(a / g, &row);
                        self.axpy(&mut new_v, m - (p / g) % m, &v);
                        debug_assert_eq!(new_row[c], g);
                        debug_assert_eq!(new_v[c], 0);
                        let ann = self.scaled(m / g, &new_row);
                        self.slots[c] = Some(new_row);
                        if ann.iter().any(|&x| x != 0) {
                            stack.push(ann);
                        }
                        v = new_v;
                    }
                }
            }
        }
    }

    /// Clears entries above each pivot to their least residue modulo the pivot.
    pub fn canonicalize(&mut self) {
        let m = self.modulus;
        for c in 0..self.ncols {
            let Some(row) = self.slots[c].clone() else { continue };
            let p = row[c];
            for other in self.slots[..c].iter_mut().flatten() {
                let q = other[c] / p;
                if q > 0 {
                    for (a, &b) in other.iter_mut().zip(&row) {
                        *a = (*a + (m - q) * b % m) % m;
                    }
                }
            }
        }
    }

    /// Rows in pivot order, with their pivot columns.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &Vec<u64>)> {
        self.slots.iter().enumerate().filter_map(|(c, r)| r.as_ref().map(|r| (c, r)))
    }

    pub fn len(&self) -> usize {
        self.slots.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Additive order of the row with the given pivot column: `m / pivot`.
    pub fn row_order(&self, pivot_col: usize) -> u64 {
        let row = self.slots[pivot_col].as_ref().expect("no row at this pivot");
        self.modulus / row[pivot_col]
    }

    /// `log2` of the span size, as a float for budget messages.
    pub fn log2_span(&self) -> f64 {
        self.rows().map(|(c, _)| (self.row_order(c) as f64).log2()).sum()
    }

    /// Span size, saturating.
    pub fn span_size(&self) -> u128 {
        self.rows().fold(1u128, |acc, (c, _)| acc.saturating_mul(self.row_order(c) as u128))
    }

    /// Reduces `v` by the rows whose pivot lies in `0..upto`. Returns the
    /// remainder and the coefficient used for each of those rows, or the
    /// first column in `0..upto` that cannot be cleared.
    pub fn reduce_prefix(&self, v: &[u64], upto: usize) -> Result<(Vec<u64>, Vec<(usize, u64)>), usize> {
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|x| x % m).collect();
        let mut coeffs = Vec::new();
        for c in 0..upto {
            if v[c] == 0 {
                continue;
            }
            let row = self.slots[c].as_ref().ok_or(c)?;
            let p = row[c];
            if !v[c].is_multiple_of(p) {
                return Err(c);
            }
            let k = v[c] / p;
            self.axpy(&mut v, m - k, row);
            coeffs.push((c, k));
        }
        Ok((v, coeffs))
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce_prefix(v, self.ncols).is_ok()
    }

    /// The canonical representative of `v` modulo the span: every pivot entry
    /// is reduced below its pivot. Requires a canonicalized basis.
    pub fn remainder(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|x| x % m).collect();
        for (c, row) in self.rows() {
            let k = v[c] / row[c];
            self.axpy(&mut v, m - k % m, row);
        }
        v
    }

    /// Smallest `k ≥ 1` with `k·v` in the span.
    pub fn relative_order(&self, v: &[u64]) -> u64 {
        let m = self.modulus;
        (1..=m).find(|&k| self.contains(&self.scaled(k, v))).unwrap_or(m)
    }
}

/// Kernel and image of the linear map sending basis vector `k` to `images[k]`.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub modulus: u64,
    pub nsrc: usize,
    pub ntgt: usize,
    /// Howell basis of the rows `[f(e_k) | e_k]`.
    augmented: HowellBasis,
}

impl LinearMap {
    pub fn new(modulus: u64, nsrc: usize, ntgt: usize, images: &[Vec<(usize, i64)>]) -> Self {
        assert_eq!(images.len(), nsrc);
        let rows = images.iter().enumerate().map(|(k, img)| {
            let mut r = vec![0u64; ntgt + nsrc];
            for &(t, c) in img {
                r[t] = (r[t] as i128 + c as i128).rem_euclid(modulus as i128) as u64;
            }
            r[ntgt + k] = 1;
            r
        });
        LinearMap { modulus, nsrc, ntgt, augmented: HowellBasis::from_rows(modulus, ntgt + nsrc, rows) }
    }

    /// Howell basis of the image.
    pub fn image(&self) -> HowellBasis {
        let rows = self.augmented.rows().filter(|(c, _)| *c < self.ntgt).map(|(_, r)| r[..self.ntgt].to_vec());
        HowellBasis::from_rows(self.modulus, self.ntgt, rows)
    }

    /// Image basis rows with a preimage for each row, in pivot order.
    pub fn image_with_preimages(&self) -> Vec<(usize, Vec<u64>, Vec<u64>)> {
        self.augmented
            .rows()
            .filter(|(c, _)| *c < self.ntgt)
            .map(|(c, r)| (c, r[..self.ntgt].to_vec(), r[self.ntgt..].to_vec()))
            .collect()
    }

    /// Howell basis of the kernel.
    pub fn kernel(&self) -> HowellBasis {
        let rows = self.augmented.rows().filter(|(c, _)| *c >= self.ntgt).map(|(_, r)| r[self.ntgt..].to_vec());
        HowellBasis::from_rows(self.modulus, self.nsrc, rows)
    }

    /// Some `x` with `f(x) = y`, or the first target column at which the
    /// normal-form reduction of `y` gets stuck, certifying that `y` is not in
    /// the image.
    pub fn solve(&self, y: &[u64]) -> Result<Vec<u64>, usize> {
        assert_eq!(y.len(), self.ntgt);
        let mut v = y.to_vec();
        v.resize(self.ntgt + self.nsrc, 0);
        let (rem, _) = self.augmented.reduce_prefix(&v, self.ntgt)?;
        // rem = [0 | -x]
        let m = self.modulus;
        Ok(rem[self.ntgt..].iter().map(|&x| (m - x) % m).collect())
    }

    pub fn apply(&self, images: &[Vec<(usize, i64)>], x: &[u64]) -> Vec<u64> {
        let m = self.modulus as i128;
        let mut out = vec![0i128; self.ntgt];
        for (k, img) in images.iter().enumerate() {
            if x[k] == 0 {
                continue;
            }
            for &(t, c) in img {
                out[t] += c as i128 * x[k] as i128;
            }
        }
        out.into_iter().map(|v| v.rem_euclid(m) as u64).collect()
    }
}
