use anyhow::{anyhow, bail, Context, Result};
use rug::Complex;

/// Integer rows `a,b,c;d,e,f`.
pub fn rows(s: &str) -> Result<Vec<Vec<i64>>> {
    let out: Vec<Vec<i64>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .with_context(|| format!("bad integer {x:?} in rows {s:?}"))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if let Some(w) = out.first().map(Vec::len) {
        if out.iter().any(|r| r.len() != w) {
            bail!("rows {s:?} have different lengths");
        }
    }
    Ok(out)
}

/// Integer polynomial such as `x^3 - x + 1` or `2*x^2+3`, returned low to
/// high.
pub fn poly(s: &str) -> Result<Vec<i64>> {
    let bad = |why: &str| anyhow!("cannot parse polynomial {s:?}: {why}");
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        if (c == '+' || c == '-') && i > start && !compact[..i].ends_with('^') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut coeffs: Vec<i64> = Vec::new();
    for t in terms {
        let (sign, body) = match t.as_bytes().first() {
            Some(b'-') => (-1, &t[1..]),
            Some(b'+') => (1, &t[1..]),
            _ => (1, t),
        };
        let (c, e) = match body.split_once('x') {
            None => (body.parse::<i64>().map_err(|_| bad(t))?, 0usize),
            Some((c, rest)) => {
                let c = c.strip_suffix('*').unwrap_or(c);
                let c = if c.is_empty() {
                    1
                } else {
                    c.parse::<i64>().map_err(|_| bad(t))?
                };
                let e = match rest.strip_prefix('^') {
                    Some(e) => e.parse::<usize>().map_err(|_| bad(t))?,
                    None if rest.is_empty() => 1,
                    None => return Err(bad(t)),
                };
                (c, e)
            }
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] += sign * c;
    }
    Ok(coeffs)
}

/// Complex numbers `re[,im];...` at `prec` bits.
pub fn complex_list(s: &str, prec: u32) -> Result<Vec<Complex>> {
    s.split(';')
        .map(|item| {
            let mut parts = item.split(',').map(str::trim);
            let re = parts.next().unwrap_or("");
            let im = parts.next().unwrap_or("0");
            if parts.next().is_some() {
                bail!("number {item:?} has more than two parts");
            }
            let re = rug::Float::parse(re).with_context(|| format!("bad real part {re:?}"))?;
            let im = rug::Float::parse(im).with_context(|| format!("bad imaginary part {im:?}"))?;
            Ok(Complex::with_val(prec, (re, im)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(poly("x^3 - x + 1").unwrap(), vec![1, -1, 0, 1]);
        assert_eq!(poly("2*x^2+3").unwrap(), vec![3, 0, 2]);
        assert_eq!(poly("-x").unwrap(), vec![0, -1]);
        assert_eq!(poly("x^2 + 3x - x^2 + 5").unwrap(), vec![5, 3, 0]);
        assert!(poly("x^a").is_err());
        assert!(poly("").is_err());
    }

    #[test]
    fn integer_rows() {
        assert_eq!(rows("1,0;0, -1").unwrap(), vec![vec![1, 0], vec![0, -1]]);
        assert!(rows("1,0;0").is_err());
        assert!(rows("1,a").is_err());
    }

    #[test]
    fn complex_numbers() {
        let z = complex_list("2;0,1;-1.5,2", 128).unwrap();
        assert_eq!(z.len(), 3);
        assert_eq!(z[1].imag().to_f64(), 1.0);
        assert_eq!(z[2].real().to_f64(), -1.5);
    }
}
