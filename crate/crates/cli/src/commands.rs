use crate::output::Outcome;
use crate::{CliError, Command, FourierArgs, Flags};
use gcmirror::courant::spinor_integrability;
use gcmirror::exterior::proportionality;
use gcmirror::fourier::default_dual_names;
use gcmirror::{
    brane_mirror, ft_torus, integrability_by_nijenhuis, parse_poly, AdaptedBlocks, Context, Ctx,
    FourierFrame, GCStructure, GaussRational, GeneratorSet, GradedElement, Poly, SemiflatPair, Structure, StructureFile,
};
use std::path::Path;

/// The report, and for `mirror` the text of the mirror file.
pub struct Executed {
    pub outcome: Outcome,
    pub file: Option<String>,
}

impl From<Outcome> for Executed {
    fn from(outcome: Outcome) -> Self {
        Executed { outcome, file: None }
    }
}

fn load(path: &Path) -> Result<StructureFile, CliError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: p.clone(), source })?;
    StructureFile::parse(&text).map_err(|source| CliError::Parse { path: p, source })
}

/// `0,0;1,1/2` as points over the chart.
pub fn parse_samples(chart: &Ctx, src: &str) -> Result<Vec<Vec<GaussRational>>, CliError> {
    src.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pt| {
            pt.split(',')
                .map(|v| {
                    parse_poly(chart, v.trim())
                        .ok()
                        .and_then(|p| p.as_constant())
                        .ok_or_else(|| CliError::Usage(format!("--samples: '{}' is not a constant", v.trim())))
                })
                .collect()
        })
        .collect()
}

pub fn execute(cmd: &Command, flags: &Flags) -> Result<Executed, CliError> {
    match cmd {
        Command::Validate { file } => validate(&load(file)?, flags).map(Into::into),
        Command::Mirror { file } => mirror(&load(file)?, flags),
        Command::Integrability { file } => integrability(&load(file)?).map(Into::into),
        Command::Spinor { file } => spinor(&load(file)?).map(Into::into),
        Command::Fourier(args) => fourier(args).map(Into::into),
        Command::Kahler { file } => kahler(&load(file)?, flags).map(Into::into),
        Command::Brane { file } => brane(&load(file)?).map(Into::into),
        Command::Dirac { file } => dirac(&load(file)?).map(Into::into),
    }
}

fn samples(f: &StructureFile, flags: &Flags) -> Result<Vec<Vec<GaussRational>>, CliError> {
    match &flags.samples {
        Some(s) => parse_samples(&f.chart, s),
        None => Ok(f.samples.clone()),
    }
}

fn header(cmd: &str, f: &StructureFile) -> Outcome {
    Outcome::new(cmd, &format!("{}, n = {}", f.structure.section(), f.n))
}

fn structure_checks(o: &mut Outcome, f: &StructureFile, samples: &[Vec<GaussRational>], prefix: &str) -> Result<(), CliError> {
    match &f.structure {
        Structure::Semiflat(b) => {
            let r = b.validate();
            o.report(prefix, &r);
            if r.is_valid() {
                let lift = b.lift().map_err(CliError::compute)?;
                o.report(&format!("{prefix}lift "), &lift.validate());
            }
        }
        Structure::Gcs(g) => o.report(prefix, &g.validate()),
        Structure::Kahler(p) => {
            let (rj, rp) = (p.j.validate(), p.jp.validate());
            let ok = rj.is_valid() && rp.is_valid();
            o.report(&format!("{prefix}J "), &rj);
            o.report(&format!("{prefix}J' "), &rp);
            if ok {
                o.report(prefix, &p.validate(samples).map_err(CliError::compute)?);
            }
        }
    }
    Ok(())
}

fn validate(f: &StructureFile, flags: &Flags) -> Result<Outcome, CliError> {
    let mut o = header("validate", f);
    structure_checks(&mut o, f, &samples(f, flags)?, "")?;
    Ok(o)
}

fn mirror(f: &StructureFile, flags: &Flags) -> Result<Executed, CliError> {
    let m = f.mirror();
    let text = m.to_text();
    let mut o = header("mirror", f);
    structure_checks(&mut o, &m, &samples(f, flags)?, "mirror ")?;
    if flags.roundtrip {
        let reparsed = StructureFile::parse(&text);
        o.check("mirror file re-parses to the same structure", reparsed.as_ref().is_ok_and(|r| *r == m), reparsed.err().map(|e| e.to_string()));
        o.check("mirror of the mirror is the original", m.mirror() == *f, None);
    }
    o.value("file", text.clone());
    Ok(Executed { outcome: o, file: Some(text) })
}

fn adapted_integrability(o: &mut Outcome, b: &AdaptedBlocks, tag: &str) -> Result<(), CliError> {
    let r = b.validate();
    o.report(tag, &r);
    if !r.is_valid() {
        return Ok(());
    }
    let flat = b.integrability().map_err(CliError::compute)?;
    let oracle = integrability_by_nijenhuis(&b.lift().map_err(CliError::compute)?).map_err(CliError::compute)?;
    o.bracket(&format!("{tag}brackets of M(flat frame) vanish"), &flat);
    o.bracket(&format!("{tag}Courant-Nijenhuis tensor vanishes"), &oracle);
    o.check(format!("{tag}verdicts agree"), flat.integrable == oracle.integrable, None);
    Ok(())
}

fn integrability(f: &StructureFile) -> Result<Outcome, CliError> {
    let mut o = header("integrability", f);
    match &f.structure {
        Structure::Semiflat(b) => adapted_integrability(&mut o, b, "")?,
        Structure::Kahler(p) => {
            adapted_integrability(&mut o, &p.j, "J ")?;
            adapted_integrability(&mut o, &p.jp, "J' ")?;
        }
        Structure::Gcs(g) => {
            let r = g.validate();
            o.report("", &r);
            if r.is_valid() {
                let v = integrability_by_nijenhuis(g).map_err(CliError::compute)?;
                o.bracket("Courant-Nijenhuis tensor vanishes", &v);
            }
        }
    }
    Ok(o)
}

fn adapted_spinor(o: &mut Outcome, b: &AdaptedBlocks, tag: &str) -> Result<(), CliError> {
    let frame = FourierFrame::new(b.base(), b.n()).map_err(CliError::compute)?;
    let phi = frame.spinor_of(b).map_err(CliError::compute)?;
    let psi = frame.mirror_spinor_of(b).map_err(CliError::compute)?;
    let image = frame.transform(&phi, &Poly::one(frame.ctx())).map_err(CliError::compute)?;
    o.value(format!("{tag}spinor"), phi.to_canonical());
    o.value(format!("{tag}mirror spinor"), psi.to_canonical());
    o.value(format!("{tag}FT(spinor)"), image.to_canonical());
    let ratio = proportionality(&image, &psi);
    o.check(format!("{tag}FT(spinor) spans the mirror spinor line"), ratio.is_some(), ratio.map(|c| format!("factor {c}")));
    Ok(())
}

fn spinor(f: &StructureFile) -> Result<Outcome, CliError> {
    let mut o = header("spinor", f);
    match &f.structure {
        Structure::Semiflat(b) => adapted_spinor(&mut o, b, "")?,
        Structure::Kahler(p) => {
            adapted_spinor(&mut o, &p.j, "J ")?;
            adapted_spinor(&mut o, &p.jp, "J' ")?;
        }
        Structure::Gcs(g) => gcs_spinor(&mut o, g)?,
    }
    Ok(o)
}

fn gcs_spinor(o: &mut Outcome, g: &GCStructure) -> Result<(), CliError> {
    let r = g.validate();
    o.report("", &r);
    if !r.is_valid() {
        return Ok(());
    }
    let gens = GeneratorSet::coordinates(g.ctx()).map_err(CliError::compute)?;
    let basis: Vec<usize> = (0..g.rank()).map(|k| 2 * k).collect();
    let phi = g.pure_spinor_in(&gens, &basis).map_err(CliError::compute)?;
    o.value("spinor", phi.to_canonical());
    let solvable = spinor_integrability(&phi).map_err(CliError::compute)?;
    o.check("d phi = iota_v phi + alpha ^ phi is solvable", solvable, None);
    Ok(())
}

fn fourier(a: &FourierArgs) -> Result<Outcome, CliError> {
    match a.bundle {
        Some(rank) => {
            let base = Context::new(a.base.clone(), vec![], false).map_err(|e| CliError::Usage(e.to_string()))?;
            let frame = FourierFrame::new(&base, rank).map_err(CliError::compute)?;
            let phi = GradedElement::parse(frame.gens(), &a.form).map_err(|e| CliError::Usage(format!("form: {e}")))?;
            let out = frame.transform(&phi, &Poly::one(frame.ctx())).map_err(CliError::compute)?;
            let mut o = Outcome::new("fourier", &format!("vector bundle, rank {rank}"));
            o.value("transform", out.to_canonical());
            let back = frame.transform_back(&out).map_err(CliError::compute)?;
            o.check("inverse transform recovers the form", back == phi, None);
            Ok(o)
        }
        None => {
            let ctx = Context::new(a.base.clone(), a.fiber.clone(), true).map_err(|e| CliError::Usage(e.to_string()))?;
            let gens = GeneratorSet::coordinates(&ctx).map_err(CliError::compute)?;
            let mu = GradedElement::parse(&gens, &a.form).map_err(|e| CliError::Usage(format!("form: {e}")))?;
            let dual = a.dual.clone().unwrap_or_else(|| default_dual_names(&ctx));
            let out = ft_torus(&mu, &dual).map_err(CliError::compute)?;
            let mut o = Outcome::new("fourier", &format!("torus, fiber dimension {}", a.fiber.len()));
            o.value("transform", out.to_canonical());
            let dmu = mu.d().map_err(CliError::compute)?;
            let commutes = ft_torus(&dmu, &dual).map_err(CliError::compute)? == out.d().map_err(CliError::compute)?;
            o.check("FT(d mu) = d FT(mu)", commutes, None);
            Ok(o)
        }
    }
}

fn kahler(f: &StructureFile, flags: &Flags) -> Result<Outcome, CliError> {
    let Structure::Kahler(p) = &f.structure else {
        return Err(CliError::Usage("kahler needs a [kahler] section".into()));
    };
    let pts = samples(f, flags)?;
    let mut o = header("kahler", f);
    structure_checks(&mut o, f, &pts, "")?;
    if !o.pass {
        return Ok(o);
    }
    let pair = p.lift().map_err(CliError::compute)?;
    o.report("", &pair.k_inverse_check().map_err(CliError::compute)?);
    let gb = p.g_blocks().map_err(CliError::compute)?;
    o.report("", &gb.buscher_check().map_err(CliError::compute)?);
    let m = p.mirror();
    o.report("mirror ", &m.validate(&pts).map_err(CliError::compute)?);
    o.check("mirror G blocks = mirrored G blocks", m.g_blocks().map_err(CliError::compute)? == gb.mirror(), None);
    let [h, b, hh, bh] = gb.fiber_fields().map_err(CliError::compute)?;
    for (name, v) in [("h", h), ("B", b), ("h^", hh), ("B^", bh)] {
        o.value(name, v.to_string().trim_end().to_string());
    }
    Ok(o)
}

fn semiflat_of(f: &StructureFile, cmd: &str) -> Result<AdaptedBlocks, CliError> {
    match &f.structure {
        Structure::Semiflat(b) => Ok(b.clone()),
        Structure::Kahler(SemiflatPair { j, .. }) => Ok(j.clone()),
        Structure::Gcs(_) => Err(CliError::Usage(format!("{cmd} needs a [semiflat] or [kahler] section"))),
    }
}

fn brane(f: &StructureFile) -> Result<Outcome, CliError> {
    let b = semiflat_of(f, "brane")?;
    let d = f.brane.as_ref().ok_or_else(|| CliError::Usage("brane needs a [brane] section".into()))?;
    let md = brane_mirror(d, f.n);
    let r = b.brane_check(d).map_err(CliError::compute)?;
    let mr = b.mirror().brane_check(&md).map_err(CliError::compute)?;
    let mut o = header("brane", f);
    let one_based = |v: &[usize]| format!("[{}]", v.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(", "));
    o.value("S", one_based(&d.s));
    o.value("W", one_based(&d.w));
    o.value("mirror W", one_based(&md.w));
    for (tag, rep) in [("", r), ("mirror ", mr)] {
        o.check(format!("{tag}E1 J13(W) in T_S"), rep.e1, None);
        o.check(format!("{tag}E2 J12(T_S) in W"), rep.e2, None);
        o.check(format!("{tag}E3 J22(Ann T_S) in W"), rep.e3, None);
        o.check(format!("{tag}E4 J31(T_S) in Ann W"), rep.e4, None);
    }
    o.check("verdict preserved by the mirror", r == mr, None);
    Ok(o)
}

fn dirac(f: &StructureFile) -> Result<Outcome, CliError> {
    let b = semiflat_of(f, "dirac")?;
    let mut o = header("dirac", f);
    let r = b.validate();
    o.report("", &r);
    if !r.is_valid() {
        return Ok(o);
    }
    let (d, h) = b.dirac_structures().map_err(CliError::compute)?;
    let (md, mh) = b.mirror().dirac_structures().map_err(CliError::compute)?;
    o.check("Delta isotropic", d.is_isotropic(), None);
    o.check("Delta^ isotropic", h.is_isotropic(), None);
    o.check("Delta + Delta^ has rank 2n", d.is_transverse_to(&h), None);
    o.check("mirror Delta = Delta^", md.same_span(&h), None);
    o.check("mirror Delta^ = Delta", mh.same_span(&d), None);
    let integrable = b.integrability().map_err(CliError::compute)?.integrable;
    let (di, hi) = (d.is_involutive().map_err(CliError::compute)?, h.is_involutive().map_err(CliError::compute)?);
    o.value("integrable", integrable.to_string());
    o.value("Delta involutive", di.to_string());
    o.value("Delta^ involutive", hi.to_string());
    o.check("involutive when integrable", !integrable || (di && hi), None);
    Ok(o)
}
