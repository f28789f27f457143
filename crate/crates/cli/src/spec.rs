//! Parsing of field and type specifications.
//!
//! A field spec is `n` or `n:g1:g2:...` (modulus and kernel generators);
//! comma-separated lists of field specs therefore stay unambiguous. A type
//! spec is `full:1,2` or `partial:1,2` with canonical representatives.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use colmez_core::cmtypes::{CMType, PartialCMType};
use colmez_core::GaloisCMField;

pub fn parse_field_spec(spec: &str) -> Result<Arc<GaloisCMField>> {
    let mut parts = spec.split(':');
    let modulus: u64 = parts
        .next()
        .ok_or_else(|| anyhow!("empty field spec"))?
        .trim()
        .parse()
        .with_context(|| format!("bad modulus in field spec `{spec}`"))?;
    let gens: Vec<u64> = parts
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .with_context(|| format!("bad generator in field spec `{spec}`"))
        })
        .collect::<Result<_>>()?;
    let field = GaloisCMField::new(modulus, &gens)
        .with_context(|| format!("field spec `{spec}` is not a CM presentation"))?;
    Ok(Arc::new(field))
}

pub fn parse_field_list(list: &str) -> Result<Vec<Arc<GaloisCMField>>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_field_spec)
        .collect()
}

pub enum TypeSpec {
    Full(CMType),
    Partial(PartialCMType),
}

pub fn parse_type_spec(field: &Arc<GaloisCMField>, spec: &str) -> Result<TypeSpec> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("type spec must be `full:...` or `partial:...`"))?;
    let reps: Vec<u64> = rest
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .with_context(|| format!("bad representative in type spec `{spec}`"))
        })
        .collect::<Result<_>>()?;
    if reps.is_empty() {
        bail!("type spec `{spec}` names no embeddings");
    }
    match kind {
        "full" => Ok(TypeSpec::Full(
            CMType::new(field.clone(), &reps)
                .with_context(|| format!("invalid CM-type `{spec}`"))?,
        )),
        "partial" => Ok(TypeSpec::Partial(
            PartialCMType::new(field.clone(), &reps)
                .with_context(|| format!("invalid partial CM-type `{spec}`"))?,
        )),
        other => bail!("unknown type kind `{other}`"),
    }
}

pub fn parse_prime_list(list: &str) -> Result<Vec<u64>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .with_context(|| format!("bad prime `{s}`"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs() {
        assert_eq!(parse_field_spec("4").unwrap().modulus(), 4);
        let f = parse_field_spec("20:9").unwrap();
        assert_eq!(f.order(), 4);
        assert!(parse_field_spec("20:19").is_err());
        assert!(parse_field_spec("x").is_err());
        let list = parse_field_list("4,20:9,5").unwrap();
        assert_eq!(list.len(), 3);
        assert_eq!(list[1].modulus(), 20);
    }

    #[test]
    fn type_specs() {
        let f5 = parse_field_spec("5").unwrap();
        assert!(matches!(
            parse_type_spec(&f5, "full:1,2").unwrap(),
            TypeSpec::Full(_)
        ));
        assert!(matches!(
            parse_type_spec(&f5, "partial:1").unwrap(),
            TypeSpec::Partial(_)
        ));
        // conjugate pair is rejected
        assert!(parse_type_spec(&f5, "partial:1,4").is_err());
        assert!(parse_type_spec(&f5, "full:1").is_err());
        assert!(parse_type_spec(&f5, "diag:1").is_err());
        assert!(parse_type_spec(&f5, "partial:").is_err());
    }
}
