//! One function per subcommand, each returning a sealed report.
//!
//! Per-field work runs through [`Exec::map`], so the report order follows
//! the order of `--q` regardless of the execution strategy.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbloch_core::abelian::{
    is_divisibility_chain, smith_normal_form, FPGroup, IntMatrix, Structure,
};
use rbloch_core::bloch::{
    lambda_map, quotient_tilde, refined_bloch, special_element, BlochPresentation,
    FormalBlochElement, Special,
};
use rbloch_core::fields::{enumerate_irreducibles, irreducible_count, is_prime};
use rbloch_core::gw::{gw_ring, GroupRing};
use rbloch_core::specialize::{
    chebotarev_search, cor_val_witness, mchi_action, odd_part, predicted_kernel, ufd_residues,
    wd_suite, ChiModule, Phi, SpecializeError, Specializer,
};
use serde_json::Value;

use crate::cache::Store;
use crate::input::parse_specialize;
use crate::report::{int, ints, ms, Check, Report, Section, Step, Table};

/// Largest `q` for which `predict-kernel` builds `P(F_q)` to cross-check.
pub const CROSS_CHECK_MAX: u64 = 125;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// The result of one unit of work (usually one field).
struct Part {
    sections: Vec<Section>,
    checks: Vec<Check>,
    row: Vec<Value>,
    step: Step,
}

impl Part {
    fn new(name: String, started: Instant) -> Self {
        Part {
            sections: Vec::new(),
            checks: Vec::new(),
            row: Vec::new(),
            step: Step {
                name,
                ms: ms(started.elapsed()),
            },
        }
    }
}

fn structure_fields(s: Section, g: &FPGroup) -> Section {
    s.with("structure", g.structure().to_string())
        .with("invariant_factors", ints(&g.invariant_factors()))
        .with("order", g.order().as_ref().map_or(Value::Null, int))
}

fn order_text(o: &Option<BigInt>) -> String {
    o.as_ref()
        .map_or_else(|| "infinite".into(), ToString::to_string)
}

fn phi_name(phi: Phi) -> &'static str {
    match phi {
        Phi::Zero => "0",
        Phi::Mod2 => "mod2",
    }
}

/// Runs `f` over `qs` with the store's strategy and assembles one report.
fn per_field(
    store: &Store,
    command: String,
    seed: Option<u64>,
    qs: &[u64],
    table: Table,
    f: impl Fn(u64) -> Result<Part> + Sync + Send,
) -> Result<(Report, Vec<Step>)> {
    let parts = store
        .exec
        .map(qs, |&q| f(q))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(Report::new(command, seed), table, parts))
}

fn assemble(mut report: Report, mut table: Table, parts: Vec<Part>) -> (Report, Vec<Step>) {
    let mut steps = Vec::new();
    for p in parts {
        report.results.extend(p.sections);
        report.checks.extend(p.checks);
        if !p.row.is_empty() {
            table.rows.push(p.row);
        }
        steps.push(p.step);
    }
    if !table.rows.is_empty() {
        report.tables.push(table);
    }
    (report.seal(), steps)
}

fn pb_part(store: &Store, q: u64) -> Result<Part> {
    let started = Instant::now();
    let p = store.pre_bloch(q)?;
    let g = p.group();
    let local = g.localize_away_2();
    let predicted = predicted_kernel(q)?.group();
    let tilde = quotient_tilde(&*p)?;
    let c = special_element(&*p, Special::C)?;
    let c_order = g.element_order(&c)?;

    let order = g.order();
    let expected = BigInt::from(q + 1);
    let six_c = c_order
        .as_ref()
        .is_some_and(|o| (BigInt::from(6) % o).is_zero());
    let checks = vec![
        Check::new(
            format!("q={q} |P(F_q)| = q+1"),
            order.as_ref() == Some(&expected),
            format!("order {}, expected {expected}", order_text(&order)),
        ),
        Check::new(
            format!("q={q} P(F_q)[1/2] is cyclic of order (q+1)'"),
            local.structure().is_cyclic() && local.structure() == predicted.structure(),
            format!(
                "{} vs predicted {}",
                local.structure(),
                predicted.structure()
            ),
        ),
        Check::new(
            format!("q={q} 6C = 0"),
            six_c,
            format!("C has order {}", order_text(&c_order)),
        ),
    ];
    let section = structure_fields(Section::new(format!("P(F_{q})")).with("q", q), g)
        .with("generators", g.generator_count())
        .with("relations", g.relations().rows())
        .with("odd_part", local.structure().to_string())
        .with("tilde", tilde.group.structure().to_string())
        .with("c_order", c_order.as_ref().map_or(Value::Null, int));
    let mut part = Part::new(format!("pb q={q}"), started);
    part.row = vec![
        q.into(),
        order.as_ref().map_or(Value::Null, int),
        local.order().as_ref().map_or(Value::Null, int),
    ];
    part.sections.push(section);
    part.checks = checks;
    Ok(part)
}

pub fn pb(store: &Store, command: String, qs: &[u64]) -> Result<(Report, Vec<Step>)> {
    per_field(
        store,
        command,
        None,
        qs,
        Table::new("pb", &["q", "order", "odd_part"]),
        |q| pb_part(store, q),
    )
}

/// `x ↦ ⟨n⟩⟨n⟩x` is the identity on every generator.
fn involution_holds(rp: &rbloch_core::bloch::RefinedPreBloch) -> Result<bool> {
    let g = rp.group();
    let n = g.generator_count();
    let twice = rp.action(1).then(rp.action(1))?;
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        if !g.equal(&twice.apply(&e)?, &e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rpb_part(store: &Store, q: u64) -> Result<Part> {
    let started = Instant::now();
    let rp = store.refined_pre_bloch(q)?;
    let p = store.pre_bloch(q)?;
    let g = rp.group();
    let coinvariants = rp.coinvariants()?;
    let tilde = quotient_tilde(&*rp)?;
    let checks = vec![
        Check::new(
            format!("q={q} RP(F_q) coinvariants = P(F_q)"),
            coinvariants.structure() == p.group().structure(),
            format!("{} vs {}", coinvariants.structure(), p.group().structure()),
        ),
        Check::new(
            format!("q={q} <n> acts as an involution"),
            involution_holds(&rp)?,
            "checked on every generator",
        ),
    ];
    let section = structure_fields(Section::new(format!("RP(F_{q})")).with("q", q), g)
        .with("generators", g.generator_count())
        .with("relations", g.relations().rows())
        .with("odd_part", g.localize_away_2().structure().to_string())
        .with("coinvariants", coinvariants.structure().to_string())
        .with("tilde", tilde.group.structure().to_string());
    let mut part = Part::new(format!("rpb q={q}"), started);
    part.row = vec![
        q.into(),
        g.structure().to_string().into(),
        tilde.group.structure().to_string().into(),
    ];
    part.sections.push(section);
    part.checks = checks;
    Ok(part)
}

pub fn rpb(store: &Store, command: String, qs: &[u64]) -> Result<(Report, Vec<Step>)> {
    per_field(
        store,
        command,
        None,
        qs,
        Table::new("rpb", &["q", "rp", "rp_tilde"]),
        |q| rpb_part(store, q),
    )
}

fn gw_part(store: &Store, q: u64) -> Result<Part> {
    let started = Instant::now();
    let gw = gw_ring(store.field(q)?)?;
    let rep = gw.report();
    let s = gw.structure();
    let expected = Structure {
        free_rank: 1,
        torsion: vec![BigInt::from(2)],
    };
    let mut checks = vec![Check::new(
        format!("q={q} GW(F_q) = Z + Z/2"),
        s == expected,
        format!("{s}, expected {expected}"),
    )];
    match &rep.consistency {
        Some(c) => checks.extend(c.checks.iter().map(|c| {
            let mut check = Check::new(
                format!("q={q} GW {}", c.name),
                c.passed,
                format!("{} instances", c.checked),
            );
            if let Some(w) = &c.witness {
                check = check.witness(w.clone());
            }
            check
        })),
        None => checks.push(Check::new(
            format!("q={q} GW identities"),
            false,
            "identity checks unavailable",
        )),
    }
    let section = Section::new(format!("GW(F_{q})"))
        .with("q", q)
        .with("structure", rep.structure.clone())
        .with("invariant_factors", ints(&rep.invariant_factors))
        .with("generators", rep.generators.clone())
        .with("multiplication", serde_json::to_value(&rep.multiplication)?);
    let mut part = Part::new(format!("gw q={q}"), started);
    part.row = vec![q.into(), rep.structure.into()];
    part.sections.push(section);
    part.checks = checks;
    Ok(part)
}

pub fn gw(store: &Store, command: String, qs: &[u64]) -> Result<(Report, Vec<Step>)> {
    per_field(
        store,
        command,
        None,
        qs,
        Table::new("gw", &["q", "structure"]),
        |q| gw_part(store, q),
    )
}

fn bloch_part(store: &Store, q: u64, evals: &[String]) -> Result<Part> {
    let started = Instant::now();
    let rp = store.refined_pre_bloch(q)?;
    let k = rp.field();
    let lambda = lambda_map(&rp)?;
    let rb = refined_bloch(&rp)?;
    let target = lambda.hom.target().clone();

    let rel = rp.group().relations();
    let mut unkilled = None;
    for i in 0..rel.rows() {
        if !target.is_zero(&lambda.hom.apply(&rel.row(i))?)? {
            unkilled = Some(rp.relation_labels()[i].clone());
            break;
        }
    }
    let checks = vec![
        Check::new(
            format!("q={q} Λ kills every relation"),
            unkilled.is_none(),
            format!("{} relations", rel.rows()),
        )
        .witness(unkilled.unwrap_or_default()),
        Check::new(
            format!("q={q} Λ is equivariant"),
            lambda.is_equivariant(&rp),
            "⟨n⟩ on both sides",
        ),
        Check::new(
            format!("q={q} 4·ker(B -> R̃B) = 0"),
            rb.kernel_killed_by_4,
            rb.tilde_kernel.structure().to_string(),
        ),
        Check::new(
            format!("q={q} B[1/2] = R̃B[1/2]"),
            rb.odd_isomorphic,
            format!(
                "{} vs {}",
                rb.bloch.localize_away_2().structure(),
                rb.tilde.localize_away_2().structure()
            ),
        ),
    ];
    let mut sections =
        vec![
            structure_fields(Section::new(format!("B(F_{q})")).with("q", q), &rb.bloch)
                .with("lambda_target", target.structure().to_string())
                .with("tilde", rb.tilde.structure().to_string())
                .with("tilde_kernel", rb.tilde_kernel.structure().to_string()),
        ];
    for text in evals {
        let xi = FormalBlochElement::parse(k, text)
            .with_context(|| format!("--eval `{text}` over F_{q}"))?;
        let v = rp.eval(&xi)?;
        let g = rp.group();
        let image = target.normal_form(&lambda.hom.apply(&v)?)?;
        sections.push(
            Section::new(format!("eval in RP(F_{q})"))
                .with("input", text.as_str())
                .with("canonical", xi.format(k))
                .with("normal_form", ints(&g.normal_form(&v)?))
                .with(
                    "order",
                    g.element_order(&v)?.as_ref().map_or(Value::Null, int),
                )
                .with("lambda", ints(&image))
                .with("in_bloch", image.iter().all(Zero::is_zero)),
        );
    }
    let mut part = Part::new(format!("bloch q={q}"), started);
    part.row = vec![
        q.into(),
        rb.bloch.structure().to_string().into(),
        rb.tilde.structure().to_string().into(),
    ];
    part.sections = sections;
    part.checks = checks;
    Ok(part)
}

pub fn bloch(
    store: &Store,
    command: String,
    qs: &[u64],
    evals: &[String],
) -> Result<(Report, Vec<Step>)> {
    per_field(
        store,
        command,
        None,
        qs,
        Table::new("bloch", &["q", "b", "b_tilde"]),
        |q| bloch_part(store, q, evals),
    )
}

fn predict_part(store: &Store, q: u64) -> Result<Part> {
    let started = Instant::now();
    let pred = predicted_kernel(q)?;
    let g = pred.group();
    let mut section = Section::new(format!("predicted kernel F_{q}"))
        .with("q", q)
        .with("order", pred.order)
        .with("structure", g.structure().to_string());
    let mut checks = Vec::new();
    if q <= CROSS_CHECK_MAX {
        let local = store.pre_bloch(q)?.group().localize_away_2();
        checks.push(Check::new(
            format!("q={q} prediction = P(F_q)[1/2]"),
            local.structure() == g.structure(),
            format!("{} vs {}", g.structure(), local.structure()),
        ));
    } else {
        section = section.with(
            "cross_check",
            format!("skipped above q = {CROSS_CHECK_MAX}"),
        );
    }
    let mut part = Part::new(format!("predict-kernel q={q}"), started);
    part.row = vec![q.into(), pred.order.into()];
    part.sections.push(section);
    part.checks = checks;
    Ok(part)
}

pub fn predict(store: &Store, command: String, qs: &[u64]) -> Result<(Report, Vec<Step>)> {
    per_field(
        store,
        command,
        None,
        qs,
        Table::new("prediction", &["q", "order"]),
        |q| predict_part(store, q),
    )
}

pub fn cheb(command: String, l: u64, bound: u64) -> Result<(Report, Vec<Step>)> {
    let started = Instant::now();
    let r = chebotarev_search(l, bound)?;
    let mut report = Report::new(command, None);
    report.results.push(
        Section::new("chebotarev")
            .with("l", r.l)
            .with("bound", r.bound)
            .with("primes_up_to_bound", r.prime_count)
            .with("matches", r.primes.len())
            .with("density", r.density)
            .with("expected", r.expected)
            .with("relative_error", r.relative_error),
    );
    let mut table = Table::new("primes", &["p"]);
    table.rows = r.primes.iter().map(|&p| vec![p.into()]).collect();
    report.tables.push(table);
    Ok((
        report.seal(),
        vec![Step {
            name: "cheb".into(),
            ms: ms(started.elapsed()),
        }],
    ))
}

pub fn specialize(store: &Store, command: String, path: &Path) -> Result<(Report, Vec<Step>)> {
    let started = Instant::now();
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let input = parse_specialize(&text).with_context(|| format!("in {}", path.display()))?;
    let kt = &input.field;
    let sp = Specializer::new();
    let mut report = Report::new(command, None);
    report.results.push(
        Section::new("input")
            .with("field", format!("F{}(t)", kt.constants().order()))
            .with("phi", phi_name(input.phi))
            .with(
                "places",
                input.places.iter().map(|p| p.label()).collect::<Vec<_>>(),
            )
            .with("elements", input.elements.len()),
    );
    let mut table = Table::new(
        "specialize",
        &["line", "element", "place", "residue_order", "image", "zero"],
    );
    for (line, xi) in &input.elements {
        let comps = ufd_residues(&sp, xi, &input.places, input.phi, store.exec)?;
        let canonical = xi.format(kt);
        let mut section = Section::new(format!("line {line}")).with("element", canonical.clone());
        for c in &comps {
            section = section.with(&c.place, ints(&c.normal_form));
            table.rows.push(vec![
                (*line).into(),
                canonical.clone().into(),
                c.place.clone().into(),
                c.residue_order.into(),
                ints(&c.normal_form).to_string().into(),
                c.zero.into(),
            ]);
        }
        report.results.push(section);
    }
    if !table.rows.is_empty() {
        report.tables.push(table);
    }
    Ok((
        report.seal(),
        vec![Step {
            name: "specialize".into(),
            ms: ms(started.elapsed()),
        }],
    ))
}

/// Largest residue field the suite specializes into. Building `P(F_Q)` takes
/// about a second at `Q = 169` and most of a minute at `Q = 625`.
const SUITE_RESIDUE_ORDER: u64 = 256;

/// `S_φ` well-definedness and the Steinberg witness over `F_q(t)`.
fn specialization_checks(
    sp: &Specializer,
    q: u64,
    seed: u64,
    trials: usize,
    store: &Store,
) -> Result<Vec<Check>> {
    let degree = if q * q <= SUITE_RESIDUE_ORDER { 2 } else { 1 };
    let mut checks = Vec::new();
    for phi in Phi::ALL {
        let r = wd_suite(
            sp,
            q,
            phi,
            trials,
            trials.div_ceil(4),
            degree,
            seed.wrapping_add(q),
            store.exec,
        )?;
        checks.push(
            Check::new(
                format!("q={q} S_φ well defined, φ={}", phi_name(phi)),
                r.passed(),
                format!(
                    "{} relations, {} ψ₁, {} translates at places of degree <= {degree}",
                    r.relations_checked, r.psi1_checked, r.equivariance_checked
                ),
            )
            .witness(r.violations.first().cloned().unwrap_or_default()),
        );
    }
    let name = format!("q={q} Steinberg image is 4y");
    checks.push(match cor_val_witness(sp, q) {
        Ok(w) => {
            let ok = w.equals_four_y
                && w.nonzero
                && w.sixteen_y_nonzero
                && w.valuation_pi_inv % 2 != 0
                && w.valuation_one_minus_pi_inv % 2 != 0;
            Check::new(
                name,
                ok,
                format!(
                    "ξ = {}, y of order {}, image {:?}",
                    w.xi, w.y_order, w.steinberg_image
                ),
            )
            .witness(serde_json::to_value(&w)?)
        }
        Err(SpecializeError::NoOddWitness(_)) => Check::new(
            name,
            odd_part(q + 1) == 1,
            "no odd-order element, (q+1)' = 1",
        ),
        Err(e) => return Err(e.into()),
    });
    Ok(checks)
}

fn abelian_checks(seed: u64, trials: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut snf_bad = None;
    let mut det_bad = None;
    for i in 0..trials {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect())
            .collect();
        let m = IntMatrix::from_i64_rows(c, &rows);
        let (d, u, v) = smith_normal_form(&m);
        let diag: Vec<BigInt> = (0..r.min(c)).map(|j| d.get(j, j)).collect();
        if u.mul(&m).mul(&v) != d
            || !u.is_unimodular()
            || !v.is_unimodular()
            || !is_divisibility_chain(&diag)
        {
            snf_bad.get_or_insert(format!("trial {i}: {rows:?}"));
        }
        if r == c {
            let det = m.determinant();
            let labels = (0..c).map(|j| format!("x{j}")).collect();
            let order = FPGroup::new(labels, m).map(|g| g.order());
            let expected = (!det.is_zero()).then(|| if det < BigInt::zero() { -det } else { det });
            if order.as_ref().ok() != Some(&expected) {
                det_bad.get_or_insert(format!("trial {i}: {rows:?}"));
            }
        }
    }
    vec![
        Check::new(
            "SNF: U·M·V = D, unimodular, divisibility",
            snf_bad.is_none(),
            format!("{trials} random matrices"),
        )
        .witness(snf_bad.unwrap_or_default()),
        Check::new(
            "|Z^n / M| = |det M| for square M",
            det_bad.is_none(),
            format!("{trials} random matrices"),
        )
        .witness(det_bad.unwrap_or_default()),
    ]
}

fn field_checks(store: &Store, q: u64, seed: u64, trials: usize) -> Result<Vec<Check>> {
    let k = store.field(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q);
    let mut bad = None;
    for _ in 0..trials {
        let [a, b, c] = [(); 3].map(|_| k.from_index(rng.gen_range(0..q as u32)));
        let ok = k.mul(k.mul(a, b), c) == k.mul(a, k.mul(b, c))
            && k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c))
            && k.frobenius(k.add(a, b)) == k.add(k.frobenius(a), k.frobenius(b))
            && (a.is_zero()
                || (k.mul(a, k.inv(a)?) == k.one() && k.pow(a, q as i64 - 1)? == k.one()));
        if !ok {
            bad.get_or_insert(format!(
                "a = {}, b = {}, c = {}",
                k.format(a),
                k.format(b),
                k.format(c)
            ));
        }
    }
    let counted: Vec<usize> = (1..=2)
        .map(|d| {
            enumerate_irreducibles(&k, d)
                .into_iter()
                .filter(|p| p.degree() == Some(d))
                .count()
        })
        .collect();
    let expected: Vec<usize> = (1..=2).map(|d| irreducible_count(q, d) as usize).collect();
    Ok(vec![
        Check::new(
            format!("q={q} field axioms"),
            bad.is_none(),
            format!("{trials} random triples"),
        )
        .witness(bad.unwrap_or_default()),
        Check::new(
            format!("q={q} irreducible counts"),
            counted == expected,
            format!("degrees 1..2: {counted:?} vs {expected:?}"),
        ),
    ])
}

fn mchi_checks() -> Result<Check> {
    let chains: [&[u64]; 4] = [&[3], &[5], &[3, 9], &[3, 15]];
    let mut checked = 0;
    let mut bad = None;
    for rank in 1..=2usize {
        for character in 1..(1usize << rank) {
            for chain in chains {
                let m = ChiModule::new(rank, character, chain)?;
                let ring = GroupRing::new(m.classes().clone());
                let neg = m.negative_classes();
                for &u in &neg {
                    for &w in &neg {
                        let a = mchi_action(&m, &ring.mul(&ring.pfister(u), &ring.pfister(w)))?;
                        checked += 1;
                        if a.scalar != BigInt::from(4) || !a.bijective {
                            bad.get_or_insert(format!(
                                "rank {rank}, χ {character}, {chain:?}: {}",
                                a.scalar
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(Check::new(
        "Steinberg elements act on M_χ as 4",
        bad.is_none(),
        format!("{checked} actions"),
    )
    .witness(bad.unwrap_or_default()))
}

fn cheb_check() -> Result<Check> {
    let (l, bound) = (3, 30);
    let r = chebotarev_search(l, bound)?;
    let brute: Vec<u64> = (2..=bound)
        .filter(|&p| is_prime(p) && (p + 1) % l == 0)
        .collect();
    Ok(Check::new(
        format!("ℓ={l} primes up to {bound}"),
        r.primes == brute,
        format!("{:?}", r.primes),
    ))
}

pub fn suite(
    store: &Store,
    command: String,
    seed: u64,
    qs: &[u64],
    trials: usize,
) -> Result<(Report, Vec<Step>)> {
    let started = Instant::now();
    let sp = Specializer::new();
    let parts = store
        .exec
        .map(qs, |&q| -> Result<Part> {
            let begun = Instant::now();
            let pb = pb_part(store, q)?;
            let rpb = rpb_part(store, q)?;
            let gw = gw_part(store, q)?;
            let bl = bloch_part(store, q, &[])?;
            let pr = predict_part(store, q)?;
            let mut checks = Vec::new();
            let mut sections = Vec::new();
            for p in [&pb, &rpb, &gw, &bl, &pr] {
                checks.extend(p.checks.iter().cloned());
                sections.extend(p.sections.iter().cloned());
            }
            checks.extend(specialization_checks(&sp, q, seed, trials, store)?);
            checks.extend(field_checks(store, q, seed, trials)?);
            let passed = checks.iter().filter(|c| c.passed).count();
            let mut part = Part::new(format!("suite q={q}"), begun);
            part.row = vec![
                q.into(),
                pb.row[1].clone(),
                rpb.row[1].clone(),
                bl.row[1].clone(),
                gw.row[1].clone(),
                passed.into(),
                checks.len().into(),
            ];
            part.sections = sections;
            part.checks = checks;
            Ok(part)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut global = Part::new("suite shared".into(), started);
    global.checks = abelian_checks(seed, trials);
    global.checks.push(mchi_checks()?);
    global.checks.push(cheb_check()?);
    let table = Table::new(
        "suite",
        &["q", "p_order", "rp", "b", "gw", "passed", "checks"],
    );
    let mut report = Report::new(command, Some(seed));
    report.results.push(
        Section::new("suite")
            .with("q_list", qs.to_vec())
            .with("trials", trials)
            .with(
                "specialization_degree_cap",
                format!("residue fields up to {SUITE_RESIDUE_ORDER} elements"),
            ),
    );
    let mut all = parts;
    all.push(global);
    Ok(assemble(report, table, all))
}
