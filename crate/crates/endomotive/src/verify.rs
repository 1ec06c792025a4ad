//! The check registry behind `dr verify`.
//!
//! Every cell of the verification grid has a stable dotted id, so a
//! selection like `kms.*` runs just that family. Identities the
//! construction guarantees report fail when broken; audited closed
//! forms report deviation instead. With a fixed seed the report list is
//! reproduced byte for byte.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bcalgebra::equivariant::equivariant_basis;
use crate::bcalgebra::operators::verify_relation_suite;
use crate::bcalgebra::orbits::galois_orbit_structure;
use crate::classgroups::{divisors, euler_phi};
use crate::drmonoid::audit::{cardinality_audit, triple_agreement};
use crate::drmonoid::builds::triple_build;
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::functor::{
    bimodule_build, component_restriction_check, dr_norm_map, dr_ver_map, omega_map,
    ver_norm_compose, ExtensionContext,
};
use crate::kms::{
    check_uniformity, gibbs_kms_check, kms_infinity_simplex, partition_function, scaling_suite,
};
use crate::nfield::ideal::{IdealRepr, IntegralIdeal};
use crate::nfield::NumberField;
use crate::report::{glob_match, Report};

const DENSITY_PRIME: u64 = 1_000_003;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Quadratic parameters; 0 stands for the rational field.
    pub fields: Vec<i64>,
    /// Conductor grid: every integral ideal of norm up to this.
    pub conductor_bound: u64,
    /// Ideal-norm bound for partition functions and truncated models.
    pub bound: u64,
    pub betas: Vec<BigRational>,
    /// Extension parameters for the base-change cells.
    pub exts: Vec<i64>,
    pub seed: u64,
    /// None runs everything; an empty list runs nothing.
    pub select: Option<Vec<String>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            fields: vec![0, -1, -3, -5, 2, 3, 5],
            conductor_bound: 12,
            bound: 100,
            betas: vec![BigRational::from_integer(BigInt::from(2))],
            exts: vec![-1, -3, -5, 2],
            seed: 0,
            select: None,
        }
    }
}

impl VerifyConfig {
    fn selected(&self, id: &str) -> bool {
        match &self.select {
            None => true,
            Some(pats) => pats.iter().any(|p| glob_match(p, id)),
        }
    }
}

pub fn field_tag(m: i64) -> String {
    if m == 0 || m == 1 {
        "q".to_string()
    } else {
        format!("m{m}")
    }
}

pub fn conductor_tag(f: &IntegralIdeal) -> String {
    match &f.repr {
        IdealRepr::Rational { n } => format!("f{n}"),
        IdealRepr::Quadratic { a, c, d } => format!("f{a}.{c}.{d}"),
    }
}

pub fn parse_field(m: i64) -> Result<NumberField, Error> {
    if m == 0 || m == 1 {
        Ok(NumberField::rational())
    } else {
        NumberField::quadratic(m)
    }
}

fn run_cell(
    out: &mut Vec<Report>,
    cfg: &VerifyConfig,
    id: &str,
    body: impl FnOnce() -> Result<Report, Error>,
) {
    if !cfg.selected(id) {
        return;
    }
    match body() {
        Ok(r) => out.push(r),
        Err(e) => out.push(Report::fail(id, e.to_string())),
    }
}

fn small_ideals(field: NumberField, bound: u64) -> Vec<IntegralIdeal> {
    IntegralIdeal::ideals_up_to(field, bound)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect()
}

fn field_cells(out: &mut Vec<Report>, cfg: &VerifyConfig, m: i64) -> Result<(), Error> {
    let field = parse_field(m)?;
    let tag = field_tag(m);
    let mut store = LevelStore::new(field);

    run_cell(out, cfg, &format!("field.build.{tag}"), || {
        let (r1, r2) = field.signature();
        Ok(Report::pass(
            format!("field.build.{tag}"),
            format!("{field}: discriminant {}, signature ({r1},{r2})", field.discriminant()),
        ))
    });

    let conductors = IntegralIdeal::ideals_up_to(field, cfg.conductor_bound);
    for f in &conductors {
        let ft = conductor_tag(f);

        let id = format!("dr.triple.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let tb = triple_build(&mut store, f)?;
            let ta = triple_agreement(&mut store, f, 0)?;
            if !ta.agreed {
                return Ok(Report::fail(&id, "constructions disagree".to_string()));
            }
            Ok(Report::pass(
                &id,
                format!(
                    "{} elements, dictionaries bijective, {} ideals classified",
                    tb.decomp.reps.len(),
                    ta.ideals_checked
                ),
            ))
        });

        let id = format!("dr.audit.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let a = cardinality_audit(&mut store, f)?;
            let detail = format!(
                "computed {}, sign-class formula {}, narrow formula {}",
                a.computed, a.sign_class_formula, a.narrow_formula
            );
            if a.matches_sign_class() {
                Ok(Report::pass(&id, detail))
            } else {
                let fibers: Vec<String> =
                    a.fibers.iter().map(|(d, n)| format!("N{}:{}", d.norm(), n)).collect();
                Ok(Report::deviation(&id, detail, fibers.join(" ")))
            }
        });

        let id = format!("dr.totient.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let total: BigInt = divisors(f).iter().map(euler_phi).sum();
            if total == f.norm() {
                Ok(Report::pass(&id, format!("sum of totients over divisors = {total}")))
            } else {
                Ok(Report::fail(&id, format!("sum {total} but norm {}", f.norm())))
            }
        });

        let id = format!("bc.orbits.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let os = galois_orbit_structure(&mut store, f)?;
            let nd = store.level(f)?.divisors.len();
            if os.orbits.len() == nd {
                Ok(Report::pass(&id, format!("{nd} orbits, one per divisor, all torsors")))
            } else {
                Ok(Report::fail(&id, format!("{} orbits for {nd} divisors", os.orbits.len())))
            }
        });

        let id = format!("kms.simplex.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let sr = kms_infinity_simplex(&mut store, f, cfg.seed)?;
            let order = store.ray_group(f)?.order();
            if sr.states == order {
                Ok(Report::pass(
                    &id,
                    format!("{} ground states, free transitive action, invariants {:?}",
                        sr.states, sr.group_invariants),
                ))
            } else {
                Ok(Report::fail(&id, format!("{} states for group order {order}", sr.states)))
            }
        });

        let id = format!("kms.measure.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let mut uniform_checks = 0usize;
            let mut bad = Vec::new();
            for g in divisors(f) {
                if g == *f {
                    continue;
                }
                let ur = check_uniformity(&mut store, f, &g)?;
                uniform_checks += 1;
                if !ur.uniform {
                    bad.push(format!("projection to {} nonuniform", conductor_tag(&g)));
                }
            }
            let mut scale_checks = 0usize;
            for d in small_ideals(field, 3) {
                let sr = scaling_suite(&mut store, f, &d, cfg.seed, 4)?;
                scale_checks += sr.checks;
                if !sr.exact {
                    bad.push(format!(
                        "scaling by N{} off on {} sets",
                        d.norm(),
                        sr.deviations.len()
                    ));
                }
            }
            let detail =
                format!("{uniform_checks} projections uniform, {scale_checks} scaling sets exact");
            if bad.is_empty() {
                Ok(Report::pass(&id, detail))
            } else if m > 1 {
                Ok(Report::deviation(&id, detail, bad.join("; ")))
            } else {
                Ok(Report::fail(&id, bad.join("; ")))
            }
        });

        if f.norm() <= BigInt::from(6u32) {
            let id = format!("bc.relations.{tag}.{ft}");
            run_cell(out, cfg, &id.clone(), || {
                let mut n = 0usize;
                for d in small_ideals(field, 3) {
                    for e in small_ideals(field, 3) {
                        verify_relation_suite(&mut store, f, &d, &e)?;
                        n += 1;
                    }
                }
                Ok(Report::pass(&id, format!("six relations exact on {n} divisor pairs")))
            });
        }

        if f.norm() <= BigInt::from(8u32) {
            let id = format!("bc.neshveyev.{tag}.{ft}");
            run_cell(out, cfg, &id.clone(), || {
                let em = equivariant_basis(&mut store, f)?;
                if !em.separates_points() {
                    return Ok(Report::fail(&id, "equivariant functions do not separate".into()));
                }
                let (exact, modp) = em.density_rank(DENSITY_PRIME)?;
                if exact != modp {
                    return Ok(Report::fail(
                        &id,
                        format!("rank {exact} over the rationals, {modp} mod {DENSITY_PRIME}"),
                    ));
                }
                Ok(Report::pass(
                    &id,
                    format!("dimension {}, separation holds, density rank {exact} confirmed mod p",
                        em.dimension()),
                ))
            });
        }
    }

    for beta in &cfg.betas {
        let id = format!("kms.partition.{tag}.b{beta}");
        run_cell(out, cfg, &id.clone(), || {
            let pv = partition_function(field, beta, cfg.bound)?;
            let detail = format!(
                "beta {beta}, bound {}: series mid {:.6} width {:.2e}, euler mid {:.6} width {:.2e}",
                pv.bound,
                pv.series.midpoint_f64(),
                pv.series.width().to_f64().unwrap_or(f64::NAN),
                pv.euler.midpoint_f64(),
                pv.euler.width().to_f64().unwrap_or(f64::NAN)
            );
            if pv.divergent {
                Ok(Report::pass(&id, format!("beta {beta} at or below the abscissa, partial sums only")))
            } else if pv.tail_certified && pv.euler_certified && pv.series.overlaps(&pv.euler) {
                Ok(Report::pass(&id, detail))
            } else if !pv.tail_certified || !pv.euler_certified {
                Ok(Report::deviation(&id, detail, "tail bound not certified at this beta".into()))
            } else {
                Ok(Report::fail(&id, detail))
            }
        });
    }

    let id = format!("kms.gibbs.{tag}");
    run_cell(out, cfg, &id.clone(), || {
        let f = small_ideals(field, 4)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Inconsistent("no small conductor".into()))?;
        let beta = BigRational::from_integer(BigInt::from(2));
        let gr = gibbs_kms_check(&mut store, &f, &beta, 10, cfg.seed)?;
        Ok(Report::pass(
            &id,
            format!("KMS identity exact on {} monomial pairs at beta 2", gr.kms_checks),
        ))
    });

    Ok(())
}

fn functor_cells(out: &mut Vec<Report>, cfg: &VerifyConfig, m: i64) -> Result<(), Error> {
    let tag = format!("q{m}");
    let mut ctx = ExtensionContext::new(NumberField::quadratic(m)?, 20)?;
    let base = ctx.base;

    for n in [2i64, 3] {
        let f = IntegralIdeal::from_integer(base, &BigInt::from(n))?;
        let ft = conductor_tag(&f);
        let id = format!("functor.maps.{tag}.{ft}");
        run_cell(out, cfg, &id.clone(), || {
            let vr = dr_ver_map(&mut ctx, &f)?;
            let nr = dr_norm_map(&mut ctx, &f)?;
            let composed = ver_norm_compose(&mut ctx, &f)?;
            Ok(Report::pass(
                &id,
                format!(
                    "extension {}->{} ({}), norm {}->{} ({}), norm after extension squares {} classes",
                    vr.base_size,
                    vr.ext_size,
                    if vr.injective { "injective" } else { "not injective" },
                    nr.ext_size,
                    nr.base_size,
                    if nr.surjective { "surjective" } else { "not surjective" },
                    composed
                ),
            ))
        });
    }

    let id = format!("functor.omega.{tag}");
    run_cell(out, cfg, &id.clone(), || {
        let f = IntegralIdeal::from_integer(base, &BigInt::from(6))?;
        let om = omega_map(&mut ctx, &f)?;
        Ok(Report::pass(
            &id,
            format!(
                "divisor retraction {} -> {} surjective, section identity holds",
                om.fine.len(),
                om.coarse.len()
            ),
        ))
    });

    let id = format!("functor.components.{tag}");
    run_cell(out, cfg, &id.clone(), || {
        let f = IntegralIdeal::from_integer(base, &BigInt::from(2))?;
        let deeper = IntegralIdeal::from_integer(base, &BigInt::from(4))?;
        let cr = component_restriction_check(&mut ctx, &f, Some(&deeper))?;
        let non_surjective: Vec<String> = cr
            .components
            .iter()
            .filter(|c| c.image_size < c.coarse_order)
            .map(|c| format!("{}:{}/{}", conductor_tag(&c.conductor), c.image_size, c.coarse_order))
            .collect();
        let detail = format!(
            "{} components, {} transition squares, {} chain squares",
            cr.components.len(),
            cr.square_checks,
            cr.chain_checks
        );
        if non_surjective.is_empty() {
            Ok(Report::pass(&id, detail))
        } else {
            Ok(Report::deviation(&id, detail, format!("image gaps {}", non_surjective.join(" "))))
        }
    });

    let id = format!("functor.bimodule.{tag}");
    run_cell(out, cfg, &id.clone(), || {
        let f = IntegralIdeal::from_integer(base, &BigInt::from(2))?;
        let br = bimodule_build(&mut ctx, &f, 16, cfg.seed)?;
        Ok(Report::pass(
            &id,
            format!(
                "{} basis tensors: balancing {}, action {} (+{} truncated), symmetry {}, positivity {}, linearity {}",
                br.bimodule.basis.len(),
                br.balancing_checks,
                br.action_checks,
                br.action_skipped,
                br.symmetry_checks,
                br.positivity_checks,
                br.linearity_checks
            ),
        ))
    });

    Ok(())
}

/// Run the selected grid cells; failures inside a cell become fail
/// reports rather than early exits.
pub fn run_verify(cfg: &VerifyConfig) -> Vec<Report> {
    let mut out = Vec::new();
    for &m in &cfg.fields {
        if let Err(e) = field_cells(&mut out, cfg, m) {
            out.push(Report::fail(format!("field.build.{}", field_tag(m)), e.to_string()));
        }
    }
    for &m in &cfg.exts {
        if let Err(e) = functor_cells(&mut out, cfg, m) {
            out.push(Report::fail(format!("functor.maps.q{m}"), e.to_string()));
        }
    }
    out
}
