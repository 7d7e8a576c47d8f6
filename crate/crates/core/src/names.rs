//! Group names: `C<n>`, `D<order>`, `S<n>` and products joined by `x`.

use std::sync::Arc;

use crate::group::{FiniteGroup, GroupError};

pub fn parse_group(name: &str) -> Result<Arc<FiniteGroup>, GroupError> {
    let bad = || GroupError::Unsupported(format!("group name {name:?}"));
    let mut parts = name.trim().split('x');
    let first = atom(parts.next().ok_or_else(bad)?).ok_or_else(bad)?;
    parts.try_fold(first, |acc, p| {
        let g = atom(p).ok_or_else(bad)?;
        Ok(FiniteGroup::direct_product(&acc, &g))
    })
}

fn atom(s: &str) -> Option<Arc<FiniteGroup>> {
    let (kind, n) = s.split_at_checked(1)?;
    let n: usize = n.parse().ok()?;
    match kind {
        "C" if n >= 1 => Some(FiniteGroup::cyclic(n)),
        "D" => FiniteGroup::dihedral(n).ok(),
        "S" => FiniteGroup::symmetric(n).ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtins_and_products() {
        assert_eq!(parse_group("C6").unwrap().order(), 6);
        assert_eq!(parse_group("D8").unwrap().order(), 8);
        assert_eq!(parse_group("S3").unwrap().order(), 6);
        let v = parse_group("C2xC2").unwrap();
        assert_eq!(v.order(), 4);
        assert_eq!(v.label(), "C2xC2");
        assert_eq!(parse_group("C2xS3xC2").unwrap().order(), 24);
        for bad in ["", "C0", "D7", "S6", "Q8", "C", "C2x", "c4"] {
            assert!(parse_group(bad).is_err(), "{bad}");
        }
    }
}
