//! Implementations of the CLI subcommands.

use num_bigint::BigInt;
use rayon::prelude::*;

use k3walls::matrix::IntMat;
use k3walls::mukai::{AlgMukaiLattice, FullMukaiLattice, MukaiVector, NsData};
use k3walls::walls::{
    build_vertical, decide_involution_bounded, fm_reduce, ClosedFormResult, Method,
    NoInvolutionReason, StarReport, StarVerdict, VerticalAnalysis, VerticalWall, WallKind, Witness,
};
use k3walls::word::{IsometryAtom, IsometryWord};

use crate::json::{self, J};
use crate::{CliError, Format};

pub struct NsSource {
    pub ns_file: Option<String>,
    pub d2: Option<i64>,
}

impl NsSource {
    pub fn load(&self) -> Result<NsData, CliError> {
        match (&self.ns_file, self.d2) {
            (Some(path), None) => json::parse_ns_file(path),
            (None, Some(d2)) => NsData::rank_one(&BigInt::from(d2)).map_err(CliError::from),
            (Some(_), Some(_)) => Err(CliError::User("give either --ns or --d2, not both".into())),
            (None, None) => Err(CliError::User("one of --ns or --d2 is required".into())),
        }
    }
}

pub fn parse_mukai_arg(text: &str, rank: usize) -> Result<MukaiVector, CliError> {
    let coords = json::parse_int_list(text, "--v")?;
    if coords.len() != rank + 2 {
        return Err(CliError::User(format!(
            "Mukai vector needs {} coordinates (r, {} theta, s), got {}",
            rank + 2,
            rank,
            coords.len()
        )));
    }
    MukaiVector::from_coords(&coords).map_err(CliError::from)
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn star_json(star: &StarReport) -> J {
    let (holds, bound) = match &star.verdict {
        StarVerdict::Yes => ("yes", None),
        StarVerdict::No => ("no", None),
        StarVerdict::YesUpToBound(b) => ("yes_up_to_bound", Some(*b)),
    };
    J::Obj(vec![
        ("holds", J::Str(holds.into())),
        ("bound", J::opt(bound.map(|b| J::Int(BigInt::from(b))))),
        ("rank1_reduction_used", J::Bool(star.rank1_reduction_used)),
        ("gcd_rs", J::int(&star.gcd_rs)),
        ("c", J::int(&star.c)),
        ("d_class", J::ints(&star.d_class)),
        (
            "failing_l",
            J::opt(star.failing_l.as_ref().map(|l| J::ints(l))),
        ),
        ("r_divides_c_d2", J::Bool(star.r_divides_c_d2)),
    ])
}

fn witness_json(wall: &VerticalWall, witness: &Witness, method: Method) -> Result<J, CliError> {
    let method = match method {
        Method::ClosedForm => "closed_form",
        Method::Enumeration => "enumeration",
    };
    let lift = |coords: &[BigInt]| -> Result<J, CliError> { Ok(J::mukai(&wall.ambient(coords)?)) };
    Ok(match witness {
        Witness::OrthogonalSpherical { class } => J::Obj(vec![
            ("kind", J::Str("orthogonal_spherical".into())),
            ("method", J::Str(method.into())),
            ("class_h", J::ints(class)),
            ("class", lift(class)?),
        ]),
        Witness::IsotropicPairing { class, pairing } => J::Obj(vec![
            ("kind", J::Str("isotropic_pairing".into())),
            ("method", J::Str(method.into())),
            ("class_h", J::ints(class)),
            ("class", lift(class)?),
            ("pairing", J::int(pairing)),
        ]),
        Witness::Decomposition { a1, a2 } => J::Obj(vec![
            ("kind", J::Str("decomposition".into())),
            ("method", J::Str(method.into())),
            ("a1_h", J::ints(a1)),
            ("a1", lift(a1)?),
            ("a2_h", J::ints(a2)),
            ("a2", lift(a2)?),
        ]),
        Witness::SphericalSmallPairing { class, pairing } => J::Obj(vec![
            ("kind", J::Str("spherical_small_pairing".into())),
            ("method", J::Str(method.into())),
            ("class_h", J::ints(class)),
            ("class", lift(class)?),
            ("pairing", J::int(pairing)),
        ]),
    })
}

fn reason_str(reason: &NoInvolutionReason) -> String {
    match reason {
        NoInvolutionReason::StarFails => "star_fails".into(),
        NoInvolutionReason::DivisorialWall { case } => match case {
            Some(c) => format!("divisorial ({})", c.label()),
            None => "divisorial".into(),
        },
        NoInvolutionReason::EClassNotPrimitive => "e_class_not_primitive".into(),
    }
}

fn analysis_json(a: &VerticalAnalysis) -> Result<J, CliError> {
    let mut witnesses = Vec::new();
    if let Some(w) = &a.classification.witness {
        witnesses.push(witness_json(&a.wall, w, a.classification.method)?);
    }
    if let Some(cf) = &a.closed_form {
        if let Some(w) = &cf.classification.witness {
            witnesses.push(witness_json(&a.wall, w, cf.classification.method)?);
        }
    }
    Ok(J::Obj(vec![
        ("v", J::mukai(&a.v)),
        ("shift_applied", J::Bool(a.shift_applied)),
        ("star", star_json(&a.star)),
        ("e", J::opt(a.e.as_ref().map(J::mukai))),
        ("e_integral", J::Bool(a.e_integral)),
        ("e_primitive", J::opt(a.e_primitive.map(J::Bool))),
        (
            "monodromy",
            J::opt(a.monodromy.map(|m| J::Str(m.as_str().into()))),
        ),
        (
            "disc_action",
            J::opt(a.disc_action.map(|d| J::Str(d.as_str().into()))),
        ),
        ("wall_type", J::Str(a.classification.kind.as_str().into())),
        ("witnesses", J::Arr(witnesses)),
        ("involution", J::Bool(a.involution)),
        (
            "reason",
            J::opt(a.reason.as_ref().map(|r| J::Str(reason_str(r)))),
        ),
    ]))
}

fn witness_text(wall: &VerticalWall, witness: &Witness) -> Result<String, CliError> {
    Ok(match witness {
        Witness::OrthogonalSpherical { class } => {
            format!("orthogonal spherical class {}", wall.ambient(class)?)
        }
        Witness::IsotropicPairing { class, pairing } => {
            format!(
                "isotropic class {} with (w,v) = {pairing}",
                wall.ambient(class)?
            )
        }
        Witness::Decomposition { a1, a2 } => {
            format!(
                "decomposition v = {} + {}",
                wall.ambient(a1)?,
                wall.ambient(a2)?
            )
        }
        Witness::SphericalSmallPairing { class, pairing } => {
            format!(
                "spherical class {} with (w,v) = {pairing}",
                wall.ambient(class)?
            )
        }
    })
}

fn analysis_text(a: &VerticalAnalysis, alg: &AlgMukaiLattice) -> Result<String, CliError> {
    let mut out = String::new();
    let v = &a.v;
    let v_sq = alg.square(v).map_err(CliError::from)?;
    out.push_str(&format!("v = {v}   v² = {v_sq}\n"));
    if a.shift_applied {
        out.push_str("(the shift was applied to reach r > 0)\n");
    }
    let star = match &a.star.verdict {
        StarVerdict::Yes => "yes".to_string(),
        StarVerdict::No => "no".to_string(),
        StarVerdict::YesUpToBound(b) => format!("yes up to |L| ≤ {b}"),
    };
    out.push_str(&format!(
        "condition (*): {star}   (gcd(r,s) = {}, c = {})\n",
        a.star.gcd_rs, a.star.c
    ));
    out.push_str(&format!(
        "wall type: {} [enumeration]\n",
        a.classification.kind.as_str()
    ));
    if let Some(w) = &a.classification.witness {
        out.push_str(&format!("witness: {}\n", witness_text(&a.wall, w)?));
    }
    if let Some(cf) = &a.closed_form {
        out.push_str(&format!(
            "closed form: {} (case: {}) — agrees\n",
            cf.classification.kind.as_str(),
            cf.case.label()
        ));
    }
    match &a.e {
        Some(e) => {
            let prim = if a.e_primitive == Some(true) {
                "primitive"
            } else {
                "imprimitive"
            };
            out.push_str(&format!("e = {e}   integral, {prim}\n"));
        }
        None => out.push_str("e: not integral (r does not divide θ²)\n"),
    }
    if let Some(m) = a.monodromy {
        out.push_str(&format!("monodromy: {}\n", m.as_str()));
    }
    if let Some(d) = a.disc_action {
        out.push_str(&format!("disc action of extended R_e: {}\n", d.as_str()));
    }
    if a.involution {
        out.push_str("involution: yes (symplectic birational involution inducing R_e)\n");
    } else {
        let reason = a.reason.as_ref().map(reason_str).unwrap_or_default();
        out.push_str(&format!("involution: no ({reason})\n"));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_classify(
    ns: &NsSource,
    v_text: &str,
    embedding: Option<&str>,
    bound: u32,
    format: Format,
) -> Result<(), CliError> {
    let ns_data = ns.load()?;
    let v = parse_mukai_arg(v_text, ns_data.rank())?;
    let alg = AlgMukaiLattice::new(ns_data.clone());
    let full = if let Some(path) = embedding {
        let emb = json::parse_embedding_file(path)?;
        Some(FullMukaiLattice::new(alg.clone(), emb)?)
    } else if ns_data.rank() == 1 {
        Some(FullMukaiLattice::rank_one(ns_data)?)
    } else {
        None
    };
    let analysis = decide_involution_bounded(&alg, &v, full.as_ref(), bound)?;
    match format {
        Format::Json => println!("{}", analysis_json(&analysis)?.render()),
        Format::Text => print!("{}", analysis_text(&analysis, &alg)?),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// isometry
// ---------------------------------------------------------------------------

fn atom_name(atom: &IsometryAtom) -> String {
    match atom {
        IsometryAtom::Exp(_) => "exp".into(),
        IsometryAtom::Shift => "shift".into(),
        IsometryAtom::SphericalTwist => "twist".into(),
        IsometryAtom::Reflect(w) => format!("refl in {w}"),
    }
}

pub fn cmd_isometry(
    ns: &NsSource,
    word_text: &str,
    v_text: &str,
    format: Format,
) -> Result<(), CliError> {
    let ns_data = ns.load()?;
    let alg = AlgMukaiLattice::new(ns_data);
    let v = parse_mukai_arg(v_text, alg.ns().rank())?;
    let word = IsometryWord::parse(&alg, word_text)?;
    let trail = word.apply_with_trail(&alg, &v)?;
    let pairing_check = match word.matrix(&alg) {
        Ok(m) => {
            let g = alg.lattice().gram();
            if &m.transpose().mul(g).mul(&m) == g {
                "ok"
            } else {
                return Err(CliError::Internal(
                    "isometry word failed the pairing-preservation self-check".into(),
                ));
            }
        }
        Err(k3walls::Error::NonIntegralReflection { .. }) => "not_globally_integral",
        Err(other) => return Err(other.into()),
    };
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("word", J::Str(word.to_string())),
                ("input", J::mukai(&v)),
                ("trail", J::Arr(trail.iter().map(J::mukai).collect())),
                ("result", J::mukai(trail.last().expect("trail nonempty"))),
                ("pairing_check", J::Str(pairing_check.into())),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            println!("word: {word}");
            println!("start: {v}");
            let atoms = word.atoms();
            for (i, step) in trail.iter().skip(1).enumerate() {
                let atom = &atoms[atoms.len() - 1 - i];
                println!("after {}: {step}", atom_name(atom));
            }
            println!("result: {}", trail.last().expect("trail nonempty"));
            println!("pairing self-check: {pairing_check}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub struct SweepRanges {
    pub d2: Vec<i64>,
    pub r: (i64, i64),
    pub c: (i64, i64),
    pub s: (i64, i64),
}

pub fn parse_range(text: &str, ctx: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let err = || {
        CliError::User(format!(
            "{ctx}: expected an inclusive range a:b, got \"{text}\""
        ))
    };
    if parts.len() != 2 {
        return Err(err());
    }
    let lo: i64 = parts[0].trim().parse().map_err(|_| err())?;
    let hi: i64 = parts[1].trim().parse().map_err(|_| err())?;
    if lo > hi {
        return Err(CliError::User(format!("{ctx}: empty range {lo}:{hi}")));
    }
    Ok((lo, hi))
}

struct SweepRecord {
    line: String,
    kind: WallKind,
    star_holds: bool,
    involution: bool,
    disagreement: bool,
}

fn sweep_record(
    alg: &AlgMukaiLattice,
    d2: i64,
    r: i64,
    c: i64,
    s: i64,
    bound: u32,
    format: Format,
) -> Result<Option<SweepRecord>, CliError> {
    if r < 1 {
        return Ok(None);
    }
    let v = MukaiVector::from_i64(r, &[c], s);
    if !v.is_primitive() {
        return Ok(None);
    }
    let v_sq = alg.square(&v)?;
    if v_sq < BigInt::from(2) {
        return Ok(None);
    }
    let a = decide_involution_bounded(alg, &v, None, bound)?;
    let closed_kind: Option<&ClosedFormResult> = a.closed_form.as_ref();
    let agree = closed_kind.map(|cf| cf.classification.kind == a.classification.kind);
    let disagreement = agree == Some(false);
    let star_holds = a.star.verdict.holds();
    let line = match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("d_sq", J::Int(BigInt::from(d2))),
                ("v", J::mukai(&v)),
                ("v_sq", J::int(&v_sq)),
                (
                    "star",
                    J::Str(match &a.star.verdict {
                        StarVerdict::Yes => "yes".into(),
                        StarVerdict::No => "no".into(),
                        StarVerdict::YesUpToBound(b) => format!("yes_up_to_bound({b})"),
                    }),
                ),
                ("wall_type", J::Str(a.classification.kind.as_str().into())),
                (
                    "closed_form",
                    J::opt(closed_kind.map(|cf| J::Str(cf.classification.kind.as_str().into()))),
                ),
                ("agree", J::opt(agree.map(J::Bool))),
                ("involution", J::Bool(a.involution)),
            ]);
            obj.render()
        }
        Format::Text => format!(
            "d2={d2} v=({r},{c},{s}) v2={v_sq} star={} wall={} closed={} involution={}",
            if star_holds { "yes" } else { "no" },
            a.classification.kind.as_str(),
            closed_kind.map_or("-", |cf| cf.classification.kind.as_str()),
            if a.involution { "yes" } else { "no" },
        ),
    };
    Ok(Some(SweepRecord {
        line,
        kind: a.classification.kind,
        star_holds,
        involution: a.involution,
        disagreement,
    }))
}

pub fn cmd_sweep(ranges: &SweepRanges, bound: u32, format: Format) -> Result<(), CliError> {
    if ranges.d2.is_empty() {
        return Err(CliError::User("--d2 list is empty".into()));
    }
    let mut combos: Vec<(usize, i64, i64, i64)> = Vec::new();
    for (i, _) in ranges.d2.iter().enumerate() {
        for r in ranges.r.0..=ranges.r.1 {
            for c in ranges.c.0..=ranges.c.1 {
                for s in ranges.s.0..=ranges.s.1 {
                    combos.push((i, r, c, s));
                }
            }
        }
    }
    let algs: Vec<AlgMukaiLattice> = ranges
        .d2
        .iter()
        .map(|&d2| AlgMukaiLattice::rank_one(&BigInt::from(d2)).map_err(CliError::from))
        .collect::<Result<_, _>>()?;

    let mut records = 0u64;
    let mut divisorial = 0u64;
    let mut flopping = 0u64;
    let mut fake = 0u64;
    let mut star_yes = 0u64;
    let mut involutions = 0u64;
    let mut disagreements = 0u64;

    // chunked so huge grids stream in bounded memory, records in input order
    for chunk in combos.chunks(2048) {
        let results: Vec<Result<Option<SweepRecord>, CliError>> = chunk
            .par_iter()
            .map(|&(i, r, c, s)| sweep_record(&algs[i], ranges.d2[i], r, c, s, bound, format))
            .collect();
        for rec in results {
            let Some(rec) = rec? else { continue };
            println!("{}", rec.line);
            records += 1;
            match rec.kind {
                WallKind::Divisorial => divisorial += 1,
                WallKind::Flopping => flopping += 1,
                WallKind::FakeOrNoWall => fake += 1,
            }
            if rec.star_holds {
                star_yes += 1;
            }
            if rec.involution {
                involutions += 1;
            }
            if rec.disagreement {
                disagreements += 1;
                eprintln!("closed-form/enumeration disagreement: {}", rec.line);
            }
        }
    }
    match format {
        Format::Json => {
            let summary = J::Obj(vec![(
                "summary",
                J::Obj(vec![
                    ("records", J::Int(records.into())),
                    ("divisorial", J::Int(divisorial.into())),
                    ("flopping", J::Int(flopping.into())),
                    ("fake_or_no_wall", J::Int(fake.into())),
                    ("star_yes", J::Int(star_yes.into())),
                    ("involutions", J::Int(involutions.into())),
                    ("disagreements", J::Int(disagreements.into())),
                ]),
            )]);
            println!("{}", summary.render());
        }
        Format::Text => {
            println!(
                "summary: {records} records, {divisorial} divisorial, {flopping} flopping, {fake} fake-or-no-wall, {star_yes} with (*), {involutions} involutions, {disagreements} disagreements"
            );
        }
    }
    if disagreements > 0 {
        return Err(CliError::Internal(format!(
            "{disagreements} closed-form/enumeration disagreements"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// lattice subcommands
// ---------------------------------------------------------------------------

pub fn load_lattice_or_matrix(
    lattice: Option<&str>,
    matrix: Option<&str>,
) -> Result<IntMat, CliError> {
    match (lattice, matrix) {
        (Some(path), None) => Ok(json::parse_gram_file(path)?.gram().clone()),
        (None, Some(text)) => {
            let rows = json::parse_inline_rows(text, "--matrix")?;
            IntMat::from_rows(rows).map_err(CliError::from)
        }
        _ => Err(CliError::User(
            "give exactly one of --lattice or --matrix".into(),
        )),
    }
}

pub fn cmd_lattice_snf(m: &IntMat, format: Format) -> Result<(), CliError> {
    let snf = m.smith_normal_form();
    if snf.u.mul(m).mul(&snf.v) != snf.d {
        return Err(CliError::Internal("U·M·V ≠ D after Smith reduction".into()));
    }
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("d", J::mat(&snf.d)),
                ("u", J::mat(&snf.u)),
                ("v", J::mat(&snf.v)),
                ("invariant_factors", J::ints(&snf.invariant_factors())),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            println!("invariant factors: {:?}", snf.invariant_factors());
            println!("d = {:?}", snf.d);
            println!("u = {:?}", snf.u);
            println!("v = {:?}", snf.v);
        }
    }
    Ok(())
}

pub fn cmd_lattice_disc(path: &str, format: Format) -> Result<(), CliError> {
    let lattice = json::parse_gram_file(path)?;
    let disc = lattice.discriminant_group()?;
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("orders", J::ints(disc.orders())),
                (
                    "q_values",
                    J::Arr(
                        disc.q_values()
                            .iter()
                            .map(|q| J::Str(q.to_string()))
                            .collect(),
                    ),
                ),
                (
                    "b_values",
                    J::Arr(
                        disc.b_values()
                            .iter()
                            .map(|row| J::Arr(row.iter().map(|b| J::Str(b.to_string())).collect()))
                            .collect(),
                    ),
                ),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            if disc.is_trivial() {
                println!("discriminant group: trivial");
            } else {
                let orders: Vec<String> = disc.orders().iter().map(|d| format!("Z/{d}")).collect();
                println!("discriminant group: {}", orders.join(" ⊕ "));
                for (i, q) in disc.q_values().iter().enumerate() {
                    println!("q(g{i}) = {q} mod 2Z");
                }
            }
        }
    }
    Ok(())
}

pub fn cmd_lattice_complement(path: &str, sub: &str, format: Format) -> Result<(), CliError> {
    let lattice = json::parse_gram_file(path)?;
    let rows = json::parse_inline_rows(sub, "--sub")?;
    let sub = lattice.sublattice(rows)?;
    let comp = lattice.orthogonal_complement(&sub)?;
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("basis", J::mat(comp.sublattice.basis())),
                ("input_was_saturated", J::Bool(comp.input_was_saturated)),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            println!("complement basis: {:?}", comp.sublattice.basis());
            if comp.input_was_saturated {
                println!("note: the input was saturated first");
            }
        }
    }
    Ok(())
}

pub fn cmd_lattice_coinv(
    path: &str,
    isometry_path: &str,
    order: u32,
    format: Format,
) -> Result<(), CliError> {
    let lattice = json::parse_gram_file(path)?;
    let m = json::parse_matrix_file(isometry_path)?;
    let iso = lattice.isometry(m)?;
    let ic = lattice.invariant_coinvariant(&iso, order)?;
    let disc = lattice
        .sublattice_gram(&ic.coinvariant)?
        .discriminant_group()?;
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("invariant", J::mat(ic.invariant.basis())),
                ("coinvariant", J::mat(ic.coinvariant.basis())),
                ("quotient_exponent", J::int(&ic.quotient_exponent)),
                ("coinvariant_disc_orders", J::ints(disc.orders())),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            println!("invariant basis: {:?}", ic.invariant.basis());
            println!("coinvariant basis: {:?}", ic.coinvariant.basis());
            println!("quotient exponent: {}", ic.quotient_exponent);
            println!("coinvariant discriminant orders: {:?}", disc.orders());
        }
    }
    Ok(())
}

pub fn cmd_lattice_u_from_isotropic(path: &str, e: &str, format: Format) -> Result<(), CliError> {
    let lattice = json::parse_gram_file(path)?;
    let e = json::parse_int_list(e, "--e")?;
    let plane = lattice.hyperbolic_from_isotropic(&e)?;
    let gram = lattice.sublattice_gram(&plane.plane)?;
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("e", J::ints(plane.plane.basis().row(0))),
                ("f", J::ints(plane.plane.basis().row(1))),
                ("m", J::int(&plane.scale)),
                ("gram", J::mat(gram.gram())),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            println!("e = {:?}", plane.plane.basis().row(0));
            println!("f = {:?}", plane.plane.basis().row(1));
            println!(
                "div(e) = {}; plane has Gram U({})",
                plane.scale,
                &plane.scale * &plane.scale
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// fm-reduce
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
pub fn cmd_fm_reduce(
    h_file: Option<&str>,
    ns: &NsSource,
    v_text: &str,
    w_text: &str,
    format: Format,
) -> Result<(), CliError> {
    let (gram, v_h, w_h) = if let Some(path) = h_file {
        let gram = json::parse_gram_file(path)?;
        let v = json::parse_int_list(v_text, "--v")?;
        let w = json::parse_int_list(w_text, "--w")?;
        (gram, v, w)
    } else {
        // ambient mode: build the vertical wall of v and express both
        // vectors in its basis
        let ns_data = ns.load()?;
        let alg = AlgMukaiLattice::new(ns_data);
        let v = parse_mukai_arg(v_text, alg.ns().rank())?;
        let w = parse_mukai_arg(w_text, alg.ns().rank())?;
        let wall = build_vertical(&alg, &v)?;
        let w_h = wall.h_coords(&w).map_err(|_| {
            CliError::User(format!("w = {w} does not lie in the vertical wall of v"))
        })?;
        (wall.gram.clone(), wall.v_h.clone(), w_h)
    };
    let red = fm_reduce(&gram, &v_h, &w_h)?;
    match format {
        Format::Json => {
            let obj = J::Obj(vec![
                ("r_prime", J::int(&red.r_prime)),
                ("basis_change", J::mat(&red.basis_change)),
                ("new_gram", J::mat(red.new_gram.gram())),
                ("v_prime", J::ints(&red.v_prime)),
                ("w_image", J::ints(&red.w_image)),
            ]);
            println!("{}", obj.render());
        }
        Format::Text => {
            println!("r' = {}", red.r_prime);
            if red.r_prime == BigInt::from(2) {
                println!("note: r' = 2 may correspond to a twisted partner surface");
            }
            println!("basis change: {:?}", red.basis_change);
            println!("new gram: {:?}", red.new_gram.gram());
            println!("v' = {:?}", red.v_prime);
            println!("w ↦ {:?}", red.w_image);
        }
    }
    Ok(())
}
