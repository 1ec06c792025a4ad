//! Finite shadows of the transfer and norm maps between the monoids.
//!
//! Class field theory moves abelian Galois data along an extension in
//! two directions, and on the monoid side this becomes a pair of maps:
//! classes of base ideals extend to classes at the extended conductor,
//! and classes on the extension side push down along the ideal norm.
//! At a fixed finite level both are plain maps of finite monoids, so
//! everything the limit statements promise can be tested element by
//! element: constancy on classes, multiplicativity, the commuting
//! squares with the shift action, and the component-wise restriction
//! maps of ray class groups that mirror the embedding of the base
//! function algebra.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::drmonoid::maps::project;
use crate::drmonoid::{default_enumeration_bound, enumerate_classes};
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

use super::extension::{omega_map, ExtensionContext};

/// The extension map on classes, with its audit counters.
pub struct VerReport {
    pub map: Vec<usize>,
    pub base_size: usize,
    pub ext_size: usize,
    pub injective: bool,
    pub pairs_checked: usize,
    pub shift_checks: usize,
}

/// Class of a base ideal to the class of its extension, at conductor f
/// upstairs and f^L downstairs. Constancy on classes and
/// multiplicativity are fatal; injectivity is recorded only, since the
/// transfer is injective in the limit but a finite level owes nothing.
pub fn dr_ver_map(ctx: &mut ExtensionContext, f: &IntegralIdeal) -> Result<VerReport, Error> {
    let fl = ctx.extend(f)?;
    let base = ctx.base_store.level(f)?;
    let ext = ctx.ext_store.level(&fl)?;
    let mut map = Vec::with_capacity(base.size);
    for idx in 0..base.size {
        let rep = base.rep_ideal(idx);
        map.push(ext.classify_ideal(&ctx.extend(&rep)?)?);
    }

    let fnorm = f
        .norm()
        .to_u64()
        .ok_or_else(|| Error::BoundExceeded("conductor norm does not fit in u64".into()))?;
    let bound = default_enumeration_bound(&mut ctx.base_store, f)?.max(2 * fnorm);
    let classes = enumerate_classes(ctx.base, f, bound)?;
    let mut pairs_checked = 0usize;
    for cls in &classes {
        let home = base.classify_ideal(&cls[0])?;
        let target = ext.classify_ideal(&ctx.extend(&cls[0])?)?;
        if map[home] != target {
            return Err(Error::Inconsistent(format!(
                "extension disagrees with the representative at the class of norm {}",
                cls[0].norm()
            )));
        }
        for other in &cls[1..] {
            pairs_checked += 1;
            if ext.classify_ideal(&ctx.extend(other)?)? != target {
                return Err(Error::Inconsistent(format!(
                    "equivalent ideals of norms {} and {} extend to different classes",
                    cls[0].norm(),
                    other.norm()
                )));
            }
        }
    }

    for x in 0..base.size {
        for y in 0..base.size {
            if ext.mul(map[x], map[y])? != map[base.mul(x, y)?] {
                return Err(Error::Inconsistent(
                    "extension map is not multiplicative".into(),
                ));
            }
        }
    }

    let mut shift_checks = 0usize;
    for n in 2u64..=8 {
        let d = IntegralIdeal::from_integer(ctx.base, &BigInt::from(n))?;
        let cd = base.classify_ideal(&d)?;
        let ce = ext.classify_ideal(&ctx.extend(&d)?)?;
        for x in 0..base.size {
            shift_checks += 1;
            if map[base.mul(x, cd)?] != ext.mul(map[x], ce)? {
                return Err(Error::Inconsistent(format!(
                    "extension does not intertwine the shift by ({})",
                    n
                )));
            }
        }
    }

    let mut seen = vec![false; ext.size];
    let mut injective = true;
    for &v in &map {
        if seen[v] {
            injective = false;
        }
        seen[v] = true;
    }
    Ok(VerReport {
        map,
        base_size: base.size,
        ext_size: ext.size,
        injective,
        pairs_checked,
        shift_checks,
    })
}

/// The norm map on classes, with its audit counters.
pub struct NormReport {
    pub map: Vec<usize>,
    pub ext_size: usize,
    pub base_size: usize,
    pub injective: bool,
    pub surjective: bool,
    pub reps_checked: usize,
    pub diagram_checks: usize,
}

/// Class of b to the class of the norm ideal, from conductor f^L down
/// to f. Whether this is well defined at every finite level is only
/// asserted empirically, on all enumerated ideals of bounded norm; a
/// counterexample is surfaced verbatim.
pub fn dr_norm_map(ctx: &mut ExtensionContext, f: &IntegralIdeal) -> Result<NormReport, Error> {
    let fl = ctx.extend(f)?;
    let base = ctx.base_store.level(f)?;
    let ext = ctx.ext_store.level(&fl)?;
    let mut map = Vec::with_capacity(ext.size);
    for idx in 0..ext.size {
        let rep = ext.rep_ideal(idx);
        map.push(base.classify_ideal(&ctx.ideal_norm(&rep)?)?);
    }

    let flnorm = fl
        .norm()
        .to_u64()
        .ok_or_else(|| Error::BoundExceeded("conductor norm does not fit in u64".into()))?;
    let bound = (2 * flnorm).clamp(20, 60);
    let mut reps_checked = 0usize;
    for b in IntegralIdeal::ideals_up_to(ctx.ext, bound) {
        let c = ext.classify_ideal(&b)?;
        let v = base.classify_ideal(&ctx.ideal_norm(&b)?)?;
        reps_checked += 1;
        if map[c] != v {
            return Err(Error::Inconsistent(format!(
                "norm is not constant on a class: the ideal of norm {} lands at {} but its class representative lands at {}",
                b.norm(),
                v,
                map[c]
            )));
        }
    }

    for x in 0..ext.size {
        for y in 0..ext.size {
            if base.mul(map[x], map[y])? != map[ext.mul(x, y)?] {
                return Err(Error::Inconsistent("norm map is not multiplicative".into()));
            }
        }
    }

    let mut diagram_checks = 0usize;
    for n in [2u64, 3, 5, 7] {
        let a = IntegralIdeal::from_integer(ctx.base, &BigInt::from(n))?;
        if !a.is_coprime(f) {
            continue;
        }
        let al = ctx.extend(&a)?;
        let ca = ext.classify_ideal(&al)?;
        let cn = base.classify_ideal(&ctx.ideal_norm(&al)?)?;
        for x in 0..ext.size {
            diagram_checks += 1;
            if map[ext.mul(x, ca)?] != base.mul(map[x], cn)? {
                return Err(Error::Inconsistent(format!(
                    "norm does not intertwine multiplication by the extension of ({})",
                    n
                )));
            }
        }
    }

    let mut seen = vec![false; base.size];
    for &v in &map {
        seen[v] = true;
    }
    let surjective = seen.iter().all(|&s| s);
    let mut injective = true;
    let mut seen2 = vec![false; base.size];
    for &v in &map {
        if seen2[v] {
            injective = false;
        }
        seen2[v] = true;
    }
    Ok(NormReport {
        map,
        ext_size: ext.size,
        base_size: base.size,
        injective,
        surjective,
        reps_checked,
        diagram_checks,
    })
}

/// Extension followed by norm squares every class: the two maps
/// composed agree with raising to the field degree on all of the base
/// monoid; returns the number of classes checked.
pub fn ver_norm_compose(ctx: &mut ExtensionContext, f: &IntegralIdeal) -> Result<usize, Error> {
    let ver = dr_ver_map(ctx, f)?;
    let norm = dr_norm_map(ctx, f)?;
    let base = ctx.base_store.level(f)?;
    let mut checks = 0usize;
    for x in 0..base.size {
        let mut power = base.one();
        for _ in 0..ctx.degree {
            power = base.mul(power, x)?;
        }
        if norm.map[ver.map[x]] != power {
            return Err(Error::Inconsistent(format!(
                "norm of the extension of class {} is not its degree power",
                x
            )));
        }
        checks += 1;
    }
    Ok(checks)
}

/// One ray class component of the restriction data.
pub struct ComponentData {
    pub conductor: IntegralIdeal,
    pub target: IntegralIdeal,
    pub fine_order: usize,
    pub coarse_order: usize,
    pub image_size: usize,
    pub map: Vec<usize>,
}

/// The component maps assembled over a level, with transition checks.
pub struct ComponentReport {
    pub components: Vec<ComponentData>,
    pub assembled: Vec<usize>,
    pub reps_checked: usize,
    pub square_checks: usize,
    pub chain_checks: usize,
}

fn component_index(comps: &[ComponentData], g: &IntegralIdeal) -> Result<usize, Error> {
    comps
        .iter()
        .position(|c| c.conductor == *g)
        .ok_or_else(|| Error::Inconsistent("component conductor missing".into()))
}

fn assemble(
    ctx: &mut ExtensionContext,
    f: &IntegralIdeal,
    comps: &[ComponentData],
) -> Result<Vec<usize>, Error> {
    let fl = ctx.extend(f)?;
    let ext = ctx.ext_store.level(&fl)?;
    let base = ctx.base_store.level(f)?;
    let mut out = vec![0usize; ext.size];
    for idx in 0..ext.size {
        let (i, c) = ext.decode(idx);
        let g = fl.div_exact(&ext.divisors[i]).expect("divisor divides the conductor");
        let ci = component_index(comps, &g)?;
        let dstar = f
            .div_exact(&comps[ci].target)
            .ok_or_else(|| Error::Inconsistent("component target does not divide f".into()))?;
        let j = base
            .divisor_index(&dstar)
            .ok_or_else(|| Error::Inconsistent("assembled divisor is missing".into()))?;
        out[idx] = base.index(j, comps[ci].map[c]);
    }
    Ok(out)
}

/// The component-wise shadow of the embedding of level algebras: for
/// every divisor of the extended conductor, the norm induces a map of
/// ray class groups down to the retracted base conductor. Constancy on
/// ray classes, the homomorphism property, and all commuting squares
/// with level projections are fatal; the image sizes are recorded
/// because the component maps are not surjective in general.
pub fn component_restriction_check(
    ctx: &mut ExtensionContext,
    f: &IntegralIdeal,
    deeper: Option<&IntegralIdeal>,
) -> Result<ComponentReport, Error> {
    let top = match deeper {
        Some(fp) => {
            if !f.divides(fp) {
                return Err(Error::BadIdeal("chain requires the first conductor to divide the second".into()));
            }
            fp.clone()
        }
        None => f.clone(),
    };
    let om = omega_map(ctx, &top)?;
    let mut components = Vec::with_capacity(om.fine.len());
    let mut reps_checked = 0usize;
    for (i, g) in om.fine.iter().enumerate() {
        let target = om.coarse[om.map[i]].clone();
        let rg_l = ctx.ext_store.ray_group(g)?;
        let rg_k = ctx.base_store.ray_group(&target)?;
        let mut map = Vec::with_capacity(rg_l.order());
        for r in &rg_l.reps {
            map.push(rg_k.classify(&ctx.ideal_norm(r)?)?);
        }
        let gnorm = g
            .norm()
            .to_u64()
            .ok_or_else(|| Error::BoundExceeded("conductor norm does not fit in u64".into()))?;
        let bound = (2 * gnorm).clamp(15, 40);
        for b in IntegralIdeal::ideals_up_to(ctx.ext, bound) {
            if !b.is_coprime(g) {
                continue;
            }
            let c = rg_l.classify(&b)?;
            let v = rg_k.classify(&ctx.ideal_norm(&b)?)?;
            reps_checked += 1;
            if map[c] != v {
                return Err(Error::Inconsistent(format!(
                    "component map at the conductor of norm {} is not constant on the class of the ideal of norm {}",
                    g.norm(),
                    b.norm()
                )));
            }
        }
        for (c1, r1) in rg_l.reps.iter().enumerate() {
            for (c2, r2) in rg_l.reps.iter().enumerate() {
                let prod = rg_k.classify(&ctx.ideal_norm(&r1.mul(r2))?)?;
                if prod != rg_k.group.mul(map[c1], map[c2]) {
                    return Err(Error::Inconsistent(format!(
                        "component map at the conductor of norm {} is not a homomorphism",
                        g.norm()
                    )));
                }
            }
        }
        let mut seen = vec![false; rg_k.order()];
        for &v in &map {
            seen[v] = true;
        }
        components.push(ComponentData {
            conductor: g.clone(),
            target,
            fine_order: rg_l.order(),
            coarse_order: rg_k.order(),
            image_size: seen.iter().filter(|&&s| s).count(),
            map,
        });
    }

    let mut square_checks = 0usize;
    for ca in &components {
        for cb in &components {
            if ca.conductor == cb.conductor || !cb.conductor.divides(&ca.conductor) {
                continue;
            }
            let fine_l = ctx.ext_store.ray_group(&ca.conductor)?;
            let coarse_l = ctx.ext_store.ray_group(&cb.conductor)?;
            let fine_k = ctx.base_store.ray_group(&ca.target)?;
            let coarse_k = ctx.base_store.ray_group(&cb.target)?;
            let pl = fine_l.project_map(&coarse_l)?;
            let pk = fine_k.project_map(&coarse_k)?;
            for c in 0..ca.fine_order {
                square_checks += 1;
                if pk[ca.map[c]] != cb.map[pl[c]] {
                    return Err(Error::Inconsistent(format!(
                        "restriction square fails between conductors of norms {} and {}",
                        ca.conductor.norm(),
                        cb.conductor.norm()
                    )));
                }
            }
        }
    }

    let assembled = assemble(ctx, f, &components)?;
    let mut chain_checks = 0usize;
    if let Some(fp) = deeper {
        let deeper_assembled = assemble(ctx, fp, &components)?;
        let fl = ctx.extend(f)?;
        let flp = ctx.extend(fp)?;
        let pr_l = project(&mut ctx.ext_store, &flp, &fl)?;
        let pr_k = project(&mut ctx.base_store, fp, f)?;
        for (idx, &down) in pr_l.map.iter().enumerate() {
            chain_checks += 1;
            if assembled[down] != pr_k.map[deeper_assembled[idx]] {
                return Err(Error::Inconsistent(
                    "assembled restriction does not commute with the level projections".into(),
                ));
            }
        }
    }

    Ok(ComponentReport {
        components,
        assembled,
        reps_checked,
        square_checks,
        chain_checks,
    })
}
