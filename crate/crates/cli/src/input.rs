//! Input files for `specialize`.
//!
//! ```text
//! # comment
//! field F5(t)
//! phi mod2
//! places t, t^2+2, inf
//! <t>[t+1] - [2]
//! 3*[t/(t+1)]
//! ```
//!
//! `places` takes monic irreducible polynomials, `inf`, and `all<=d` (every
//! finite place of degree at most `d`). Every remaining nonblank line is a
//! formal Bloch element.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rbloch_core::bloch::FormalBlochElement;
use rbloch_core::fields::{
    parse_rational, FieldHeader, FiniteField, FunctionField, FunctionFieldElement, ValuedPlace,
};
use rbloch_core::specialize::{places_up_to, Phi};

#[derive(Debug)]
pub struct SpecializeInput {
    pub field: FunctionField,
    pub phi: Phi,
    pub places: Vec<ValuedPlace>,
    pub elements: Vec<(usize, FormalBlochElement<FunctionFieldElement>)>,
}

pub fn parse_specialize(text: &str) -> Result<SpecializeInput> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = lines
        .next()
        .ok_or_else(|| anyhow!("empty input, expected a `field F<q>(t)` line"))?;
    let header: FieldHeader = header.parse().with_context(|| format!("line {n}"))?;
    if !header.rational {
        bail!("line {n}: specialization needs a rational function field `field F<q>(t)`");
    }
    let k = Arc::new(FiniteField::of_order(header.q).with_context(|| format!("line {n}"))?);
    let field = FunctionField::new(k.clone());

    let mut phi = None;
    let mut places: Option<Vec<ValuedPlace>> = None;
    let mut elements = Vec::new();
    for (n, line) in lines {
        if let Some(rest) = line.strip_prefix("phi ") {
            let p: Phi = rest.parse().map_err(|e: String| anyhow!("line {n}: {e}"))?;
            if phi.replace(p).is_some() {
                bail!("line {n}: `phi` given twice");
            }
        } else if let Some(rest) = line.strip_prefix("places ") {
            let parsed = parse_places(&field, rest).with_context(|| format!("line {n}"))?;
            if places.replace(parsed).is_some() {
                bail!("line {n}: `places` given twice");
            }
        } else {
            let xi = FormalBlochElement::parse(&field, line)
                .with_context(|| format!("line {n}: `{line}`"))?;
            elements.push((n, xi));
        }
    }
    Ok(SpecializeInput {
        field,
        phi: phi.ok_or_else(|| anyhow!("missing `phi 0` or `phi mod2` line"))?,
        places: places.ok_or_else(|| anyhow!("missing `places` line"))?,
        elements,
    })
}

fn parse_places(kt: &FunctionField, text: &str) -> Result<Vec<ValuedPlace>> {
    let k = kt.constants();
    let mut out: Vec<ValuedPlace> = Vec::new();
    for item in text.split(',').map(str::trim) {
        let new = if item == "inf" {
            vec![ValuedPlace::infinite(k.clone())?]
        } else if let Some(d) = item.strip_prefix("all<=") {
            let d: usize = d
                .trim()
                .parse()
                .with_context(|| format!("bad degree in `{item}`"))?;
            places_up_to(k, d, false)?
        } else {
            let f = parse_rational(kt, item, 0).with_context(|| format!("place `{item}`"))?;
            if !f.denominator().is_one() {
                bail!("place `{item}` is not a polynomial");
            }
            vec![ValuedPlace::finite(k.clone(), f.numerator().clone())?]
        };
        for p in new {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    if out.is_empty() {
        bail!("no places listed");
    }
    Ok(out)
}
