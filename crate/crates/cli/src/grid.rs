//! Command-line grids: a single value, `a..b` (inclusive integers),
//! `a:step:b` (reals, endpoint included when hit) or a comma list of these.

fn items(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn parse_int_grid(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in items(text) {
        if let Some((a, b)) = item.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| format!("bad range start in '{item}'"))?;
            let b: usize = b.trim().parse().map_err(|_| format!("bad range end in '{item}'"))?;
            if b < a {
                return Err(format!("empty range '{item}'"));
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| format!("'{item}' is not a non-negative integer"))?);
        }
    }
    if out.is_empty() {
        return Err(format!("empty grid '{text}'"));
    }
    Ok(out)
}

fn real(text: &str, item: &str) -> Result<f64, String> {
    let v: f64 = text.trim().parse().map_err(|_| format!("'{}' in '{item}' is not a number", text.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value in '{item}'"))
    }
}

pub fn parse_real_grid(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in items(text) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] if v.contains("..") => {
                out.extend(parse_int_grid(v)?.into_iter().map(|i| i as f64));
            }
            [v] => out.push(real(v, item)?),
            [a, step, b] => {
                let (a, step, b) = (real(a, item)?, real(step, item)?, real(b, item)?);
                if !(step > 0.0) || b < a {
                    return Err(format!("range '{item}' needs a positive step and start <= end"));
                }
                let count = ((b - a) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
                if count > 10_000_000 {
                    return Err(format!("range '{item}' has too many points"));
                }
                out.extend((0..count).map(|k| a + k as f64 * step));
            }
            _ => return Err(format!("cannot parse grid item '{item}'")),
        }
    }
    if out.is_empty() {
        return Err(format!("empty grid '{text}'"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ranges() {
        assert_eq!(parse_int_grid("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_int_grid("3").unwrap(), vec![3]);
        assert_eq!(parse_int_grid("1..2, 7").unwrap(), vec![1, 2, 7]);
        assert!(parse_int_grid("4..1").is_err());
        assert!(parse_int_grid("-1").is_err());
        assert!(parse_int_grid("").is_err());
    }

    #[test]
    fn real_ranges() {
        assert_eq!(parse_real_grid("0:0.5:2").unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(parse_real_grid("0.1:0.1:0.3").unwrap().len(), 3);
        assert_eq!(parse_real_grid("-3,0.5").unwrap(), vec![-3.0, 0.5]);
        assert_eq!(parse_real_grid("1..3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_real_grid("1:0:2").is_err());
        assert!(parse_real_grid("x").is_err());
        assert!(parse_real_grid("nan").is_err());
    }
}
