//! Aberth iteration in multiprecision with certified inclusion discs.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::poly::ZPoly;

const MAX_SWEEPS: usize = 600;

/// A disc `|z - center| <= radius` containing exactly one root.
#[derive(Clone, Debug)]
pub struct Enclosure {
    pub center: Complex,
    pub radius: Float,
}

impl Enclosure {
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.center.real().to_f64(), self.center.imag().to_f64())
    }

    pub fn modulus(&self) -> Float {
        Float::with_val(self.center.prec().0, self.center.abs_ref())
    }
}

pub(crate) fn to_rug(x: &num_bigint::BigInt) -> rug::Integer {
    x.to_string().parse().expect("decimal integer")
}

fn coeffs(f: &ZPoly, prec: u32) -> Vec<Float> {
    f.coeffs()
        .iter()
        .map(|c| Float::with_val(prec, to_rug(c)))
        .collect()
}

fn horner(a: &[Float], z: &Complex, prec: u32) -> (Complex, Complex) {
    let mut p = Complex::with_val(prec, 0);
    let mut dp = Complex::with_val(prec, 0);
    for c in a.iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

fn initial(a: &[Float], prec: u32) -> Vec<Complex> {
    let d = a.len() - 1;
    let lead = a[d].to_f64().abs();
    let cauchy = 1.0
        + a[..d]
            .iter()
            .map(|c| c.to_f64().abs() / lead)
            .fold(0.0, f64::max);
    let center = -a[d - 1].to_f64() / (d as f64 * a[d].to_f64());
    (0..d)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            Complex::with_val(prec, (center + cauchy * th.cos(), cauchy * th.sin()))
        })
        .collect()
}

fn abs(z: &Complex, prec: u32) -> Float {
    Float::with_val(prec, z.abs_ref())
}

/// All roots of a squarefree `f` as pairwise disjoint discs, or `None` if the
/// iteration does not settle or the discs overlap at this precision.
///
/// The radius around `z_i` is `d |f(z_i)| / |a_d prod_{j != i} (z_i - z_j)|`
/// with the Horner rounding error added to `|f(z_i)|`; when these discs are
/// disjoint each holds exactly one root. Roots come sorted by real part, then
/// imaginary part, with the members of a conjugate pair sharing one real
/// part. Discs meeting the real axis are treated as real roots.
pub fn certified_roots(f: &ZPoly, prec: u32) -> Option<Vec<Enclosure>> {
    let d = f.degree()?;
    if d == 0 {
        return Some(Vec::new());
    }
    let a = coeffs(f, prec);
    let mut z = if d == 1 {
        vec![Complex::with_val(prec, -(a[0].clone() / &a[1]))]
    } else {
        initial(&a, prec)
    };
    let stop = Float::with_val(prec, 2).pow(8 - prec as i32);
    let mut settled = d == 1;
    for _ in 0..MAX_SWEEPS {
        if settled {
            break;
        }
        let mut worst = Float::with_val(prec, 0);
        for i in 0..d {
            let (p, dp) = horner(&a, &z[i], prec);
            if p.is_zero() {
                continue;
            }
            let ratio = Complex::with_val(prec, &p / &dp);
            let mut s = Complex::with_val(prec, 0);
            for j in 0..d {
                if j != i {
                    let diff = Complex::with_val(prec, &z[i] - &z[j]);
                    s += diff.recip();
                }
            }
            let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &ratio * &s);
            let w = ratio / denom;
            let size = abs(&w, prec) / abs(&z[i], prec).max(&Float::with_val(prec, 1));
            if size > worst {
                worst = size;
            }
            z[i] -= w;
        }
        if !worst.is_finite() {
            return None;
        }
        settled = worst < stop;
    }
    if !settled {
        return None;
    }
    let unit = Float::with_val(prec, 2).pow(-(prec as i32));
    let lead = a[d].clone().abs();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let (p, _) = horner(&a, &z[i], prec);
        let m = abs(&z[i], prec);
        let mut bound = Float::with_val(prec, 0);
        let mut pw = Float::with_val(prec, 1);
        for c in &a {
            bound += Float::with_val(prec, c.abs_ref()) * &pw;
            pw *= &m;
        }
        let eval_err = bound * Float::with_val(prec, 4 * d + 4) * &unit;
        let mut denom = lead.clone();
        for j in 0..d {
            if j != i {
                denom *= abs(&Complex::with_val(prec, &z[i] - &z[j]), prec);
            }
        }
        if denom.is_zero() {
            return None;
        }
        let r = (abs(&p, prec) + eval_err) * Float::with_val(prec, d) / denom;
        let r = r * (Float::with_val(prec, 1) + Float::with_val(prec, 2).pow(20 - prec as i32));
        out.push(Enclosure {
            center: z[i].clone(),
            radius: r,
        });
    }
    for i in 0..d {
        for j in i + 1..d {
            let gap = abs(
                &Complex::with_val(prec, &out[i].center - &out[j].center),
                prec,
            );
            if gap <= Float::with_val(prec, &out[i].radius + &out[j].radius) {
                return None;
            }
        }
    }
    Some(sort_roots(out, prec))
}

fn sort_roots(mut roots: Vec<Enclosure>, prec: u32) -> Vec<Enclosure> {
    for e in &mut roots {
        if Float::with_val(prec, e.center.imag().abs_ref()) <= e.radius {
            *e.center.mut_imag() = Float::with_val(prec, 0);
        }
    }
    let mut key: Vec<Float> = roots.iter().map(|e| e.center.real().clone()).collect();
    for i in 0..roots.len() {
        if !roots[i].center.imag().is_sign_positive() || roots[i].center.imag().is_zero() {
            continue;
        }
        let conj = Complex::with_val(prec, roots[i].center.conj_ref());
        let j = (0..roots.len()).filter(|&j| j != i).min_by(|&x, &y| {
            let dx = abs(&Complex::with_val(prec, &roots[x].center - &conj), prec);
            let dy = abs(&Complex::with_val(prec, &roots[y].center - &conj), prec);
            dx.partial_cmp(&dy).unwrap_or(Ordering::Equal)
        });
        if let Some(j) = j {
            key[j] = key[i].clone();
        }
    }
    let mut idx: Vec<usize> = (0..roots.len()).collect();
    idx.sort_by(|&x, &y| {
        key[x]
            .partial_cmp(&key[y])
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                roots[x]
                    .center
                    .imag()
                    .partial_cmp(roots[y].center.imag())
                    .unwrap_or(Ordering::Equal)
            })
    });
    idx.into_iter().map(|k| roots[k].clone()).collect()
}

/// Roots at `prec` bits, doubling up to `max_prec`. Returns the precision used.
pub fn roots_adaptive(f: &ZPoly, prec: u32, max_prec: u32) -> Option<(Vec<Enclosure>, u32)> {
    let mut p = prec.max(64);
    loop {
        if let Some(r) = certified_roots(f, p) {
            return Some((r, p));
        }
        if p >= max_prec {
            return None;
        }
        p = (2 * p).min(max_prec);
    }
}

/// Cheap double precision Mahler measure from companion eigenvalues.
pub fn mahler_f64(f: &[i64]) -> f64 {
    let d = f.len() - 1;
    let lead = f[d] as f64;
    if d == 0 {
        return lead.abs();
    }
    let m = nalgebra::DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -(f[i] as f64) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let ev = m.complex_eigenvalues();
    ev.iter().fold(lead.abs(), |acc, z| acc * z.norm().max(1.0))
}
