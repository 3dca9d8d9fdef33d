use std::collections::BTreeSet;

use formclass_core::field::{characteristic_fields, extended_fields, kernel_fields};
use formclass_core::pair::{
    almost_multisymplectic, class_by_grassmann, classify, ker_omega_decomposition, three_form_kernel_identity,
    verify_class_criteria,
};
use formclass_core::precontact::{
    conformal_equivalence_check, darboux_model, default_z_values, hamiltonian_solutions_at, model_coordinates,
    model_equals, necessary_conditions_at, odd_preservation_check, parity_change_check, precontact_report,
    presymplectize_scan, primary_constraint_scan, sufficient_conditions_check, wedge_power_identity_check,
    ConformalPair, DarbouxFamily, FieldSource,
};
use formclass_core::scan::{grid_scan, involutive_at};
use formclass_core::{parse_rational, Error, Parity, PolyForm, PolyVectorField, Rational, SampleDomain, ScanReport};
use serde_json::{json, Map, Value};

use crate::document::Workspace;
use crate::error::CliError;
use crate::report::{self, rational, rationals, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    ClassifyPoint,
    Scan,
    Precontact,
    Presymplectize,
    Conformal,
    ParityChange,
    OddPreserve,
    Hamiltonian,
    Constraints,
    Involutive,
    Lemma62,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::ClassifyPoint,
        Command::Scan,
        Command::Precontact,
        Command::Presymplectize,
        Command::Conformal,
        Command::ParityChange,
        Command::OddPreserve,
        Command::Hamiltonian,
        Command::Constraints,
        Command::Involutive,
        Command::Lemma62,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::ClassifyPoint => "classify-point",
            Command::Scan => "scan",
            Command::Precontact => "precontact",
            Command::Presymplectize => "presymplectize",
            Command::Conformal => "conformal",
            Command::ParityChange => "parity-change",
            Command::OddPreserve => "odd-preserve",
            Command::Hamiltonian => "hamiltonian",
            Command::Constraints => "constraints",
            Command::Involutive => "involutive",
            Command::Lemma62 => "lemma62",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Command-line options shared by all commands. Names refer to entries of
/// the workspace document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// `x=1,y=-1/2`: restricts the analysis to one point.
    pub point: Option<String>,
    pub form: Option<String>,
    /// Defaults to the exterior derivative of `form`.
    pub omega: Option<String>,
    pub function: Option<String>,
    pub n: Option<usize>,
    /// Nowhere-zero function for the conformal equivalence check.
    pub scale: Option<String>,
    /// Vector fields spanning a distribution.
    pub fields: Vec<String>,
}

pub fn run(command: Command, ws: &Workspace, flags: &Flags) -> Result<Report, CliError> {
    let ctx = Ctx::new(command, ws, flags);
    match command {
        Command::ClassifyPoint => classify_point(ctx),
        Command::Scan => scan(ctx),
        Command::Precontact => precontact(ctx),
        Command::Presymplectize => presymplectize(ctx),
        Command::Conformal => conformal(ctx),
        Command::ParityChange => parity_change(ctx),
        Command::OddPreserve => odd_preserve(ctx),
        Command::Hamiltonian => hamiltonian(ctx),
        Command::Constraints => constraints(ctx),
        Command::Involutive => involutive(ctx),
        Command::Lemma62 => lemma62(ctx),
    }
}

struct Ctx<'a> {
    ws: &'a Workspace,
    flags: &'a Flags,
    echo: Map<String, Value>,
}

impl<'a> Ctx<'a> {
    fn new(command: Command, ws: &'a Workspace, flags: &'a Flags) -> Self {
        let mut echo = Map::new();
        echo.insert("name".into(), command.as_str().into());
        Ctx { ws, flags, echo }
    }

    fn names(&self) -> &[String] {
        &self.ws.coordinates
    }

    fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.echo.insert(key.into(), value.into());
    }

    fn finish(self, points: Vec<Value>, summary: Value) -> Result<Report, CliError> {
        Ok(Report::new(Value::Object(self.echo), &self.ws.coordinates, points, summary))
    }

    fn named_form(&mut self, flag: &'static str, name: &str, degree: usize) -> Result<PolyForm, CliError> {
        let form = self.ws.form(name)?;
        if form.degree() != degree {
            return Err(CliError::BadFlag {
                flag,
                message: format!("form `{name}` has degree {}, expected {degree}", form.degree()),
            });
        }
        self.note(flag, name);
        Ok(form.clone())
    }

    /// The 1-form of `--form`.
    fn tau(&mut self) -> Result<PolyForm, CliError> {
        let name = self.flags.form.clone().ok_or(CliError::MissingFlag("form"))?;
        self.named_form("form", &name, 1)
    }

    /// `--form` and `--omega`, the latter defaulting to `d(form)`.
    fn pair(&mut self) -> Result<(PolyForm, PolyForm), CliError> {
        let tau = self.tau()?;
        let omega = match self.flags.omega.clone() {
            Some(name) => self.named_form("omega", &name, 2)?,
            None => {
                let form = self.flags.form.clone().unwrap_or_default();
                self.note("omega", format!("d({form})"));
                tau.exterior_derivative()
            }
        };
        Ok((tau, omega))
    }

    fn function(&mut self) -> Result<formclass_core::Polynomial, CliError> {
        let name = self.flags.function.clone().ok_or(CliError::MissingFlag("function"))?;
        let f = self.ws.function(&name)?.clone();
        self.note("function", name);
        Ok(f)
    }

    fn fields(&mut self) -> Result<Option<Vec<PolyVectorField>>, CliError> {
        if self.flags.fields.is_empty() {
            return Ok(None);
        }
        let fields = self
            .flags
            .fields
            .iter()
            .map(|n| self.ws.vector_field(n).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        self.note("fields", self.flags.fields.clone());
        Ok(Some(fields))
    }

    fn point(&mut self) -> Result<Option<Vec<Rational>>, CliError> {
        let Some(text) = self.flags.point.clone() else {
            return Ok(None);
        };
        let p = parse_point(self.ws, &text)?;
        self.note("point", rationals(&p));
        Ok(Some(p))
    }

    /// The single `--point` if given, else the document's sample domain.
    fn domain(&mut self) -> Result<SampleDomain, CliError> {
        Ok(match self.point()? {
            Some(p) => SampleDomain::points_only(self.ws.dim(), vec![p])?,
            None => self.ws.domain.clone(),
        })
    }
}

/// Parses `name=value,...`; every coordinate must be given exactly once.
pub fn parse_point(ws: &Workspace, text: &str) -> Result<Vec<Rational>, CliError> {
    let bad = |message: String| CliError::BadFlag { flag: "point", message };
    let mut values: Vec<Option<Rational>> = vec![None; ws.dim()];
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("`{part}` is not of the form name=value")))?;
        let i = ws.coordinate(name.trim())?;
        let v = parse_rational(value).ok_or_else(|| bad(format!("`{}` is not a rational literal", value.trim())))?;
        if values[i].replace(v).is_some() {
            return Err(bad(format!("coordinate `{}` given twice", name.trim())));
        }
    }
    values
        .into_iter()
        .zip(&ws.coordinates)
        .map(|(v, name)| v.ok_or_else(|| bad(format!("missing coordinate `{name}`"))))
        .collect()
}

fn classes(set: &BTreeSet<usize>) -> Value {
    json!(set.iter().collect::<Vec<_>>())
}

fn parities(set: &BTreeSet<Parity>) -> Value {
    json!(set.iter().map(|p| p.as_str()).collect::<Vec<_>>())
}

fn scan_summary(scan: &ScanReport) -> Map<String, Value> {
    let mut s = Map::new();
    s.insert("classes".into(), classes(&scan.classes));
    s.insert("constant".into(), scan.constant_on_samples.into());
    s.insert("class".into(), json!(scan.constant_class()));
    s.insert("parities".into(), parities(&scan.parities));
    s.insert("tau_vanishes_somewhere".into(), scan.tau_vanishes_somewhere.into());
    s.insert("samples".into(), scan.points.len().into());
    s
}

fn scan_points(scan: &ScanReport) -> Vec<Value> {
    scan.points
        .iter()
        .map(|(p, r)| {
            json!({
                "point": rationals(p),
                "class": r.class,
                "parity": r.parity.as_str(),
                "omega_rank": r.omega_rank,
                "tau_vanishes": r.tau_vanishes,
            })
        })
        .collect()
}

fn render_fields(fields: &[PolyVectorField], names: &[String]) -> Value {
    json!(fields.iter().map(|f| f.render(names)).collect::<Vec<_>>())
}

fn classify_point(mut ctx: Ctx) -> Result<Report, CliError> {
    let (tau, omega) = ctx.pair()?;
    let p = ctx.point()?.ok_or(CliError::MissingFlag("point"))?;
    let t = tau.evaluate(&p)?;
    let w = omega.evaluate(&p)?;
    let rep = classify(&t, &w)?;
    let criteria = verify_class_criteria(&t, &w)?;
    let decomposition = ker_omega_decomposition(&t, &w)?;

    let mut entry = report::pair(&rep);
    let obj = entry.as_object_mut().expect("pair report is an object");
    obj.insert("point".into(), rationals(&p));
    obj.insert("class_by_grassmann".into(), class_by_grassmann(&t, &w)?.into());
    obj.insert(
        "criteria".into(),
        json!({
            "r": criteria.r,
            "tau_nonzero": criteria.tau_nonzero,
            "omega_r_nonzero": criteria.omega_r_nonzero,
            "tau_omega_r_nonzero": criteria.tau_omega_r_nonzero,
            "lepage": criteria.lepage,
            "consistent": criteria.consistent,
        }),
    );
    obj.insert("ker_omega_decomposition".into(), decomposition.holds.into());
    obj.insert("three_form_kernel_identity".into(), json!(three_form_kernel_identity(&t, &w)?));
    obj.insert("almost_multisymplectic".into(), almost_multisymplectic(&t, &w)?.into());

    let summary = json!({
        "class": rep.class,
        "parity": rep.parity.as_str(),
        "witness": rep.witness.kind(),
        "criteria_consistent": criteria.consistent,
    });
    ctx.finish(vec![entry], summary)
}

fn scan(mut ctx: Ctx) -> Result<Report, CliError> {
    let (tau, omega) = ctx.pair()?;
    let dom = ctx.domain()?;
    let scan = grid_scan(&tau, &omega, &dom)?;
    let points = scan_points(&scan);
    ctx.finish(points, Value::Object(scan_summary(&scan)))
}

fn precontact(mut ctx: Ctx) -> Result<Report, CliError> {
    let eta = ctx.tau()?;
    let dom = ctx.domain()?;
    let rep = precontact_report(&eta, &dom)?;

    let darboux = match rep.darboux_family {
        DarbouxFamily::NotConstant => json!({ "family": "not-constant" }),
        DarbouxFamily::OddModel { r, m } | DarbouxFamily::EvenModel { r, m } => {
            let parity = rep.parity.expect("constant class has a parity");
            let names = model_coordinates(parity, r, m)?;
            let model = darboux_model(parity, r, m)?;
            json!({
                "family": parity.as_str(),
                "r": r,
                "coordinates": names,
                "model": model.render(&names),
                "input_equals_model": model_equals(&eta, &model),
            })
        }
    };
    let mut summary = scan_summary(&rep.scan);
    summary.insert("precontact".into(), rep.precontact.into());
    summary.insert("nowhere_vanishing".into(), rep.nowhere_vanishing_on_samples.into());
    summary.insert("r".into(), json!(rep.r));
    summary.insert("parity".into(), json!(rep.parity.map(Parity::as_str)));
    summary.insert("darboux".into(), darboux);
    summary.insert("wedge_route_agrees".into(), rep.wedge_route_agrees.into());
    summary.insert("identity_criteria".into(), json!(rep.identity_criteria));
    summary.insert("d_form".into(), eta.exterior_derivative().render(ctx.names()).into());
    let points = scan_points(&rep.scan);
    ctx.finish(points, Value::Object(summary))
}

fn presymplectize(mut ctx: Ctx) -> Result<Report, CliError> {
    let eta = ctx.tau()?;
    let dom = ctx.domain()?;
    let z_values = default_z_values();
    let rep = presymplectize_scan(&eta, &dom, z_values.clone())?;

    let mut names = ctx.names().to_vec();
    let z = ["z", "z0", "z1", "z2"]
        .into_iter()
        .find(|c| !names.iter().any(|n| n == c))
        .unwrap_or("zeta");
    names.push(z.to_string());

    let pre = &rep.presymplectization;
    let summary = json!({
        "new_coordinate": z,
        "z_values": rationals(&z_values),
        "form": pre.form.render(&names),
        "liouville": pre.liouville.render(&names),
        "liouville_identity": pre.liouville_identity,
        "base_classes": classes(&rep.base.classes),
        "lifted_classes": classes(&rep.lifted.classes),
        "lifted_constant": rep.lifted.constant_on_samples,
        "lifted_parities": parities(&rep.lifted.parities),
        "agrees_with_expected": rep.agrees_with_expected,
    });
    let points = rep
        .comparisons
        .iter()
        .map(|(p, got, want)| json!({ "point": rationals(p), "class": got, "expected": want }))
        .collect();
    ctx.finish(points, summary)
}

fn conformal(mut ctx: Ctx) -> Result<Report, CliError> {
    let (tau, omega) = ctx.pair()?;
    let f = ctx.function()?;
    let dom = ctx.domain()?;
    let pair = ConformalPair::new(tau, omega, f);
    let scan = pair.scan(&dom)?;
    let mut summary = scan_summary(&scan);
    summary.insert("reduced_omega".into(), pair.reduced_omega().render(ctx.names()).into());
    let points = scan_points(&scan);
    ctx.finish(points, Value::Object(summary))
}

fn sufficient_summary(
    tau: &PolyForm,
    omega: &PolyForm,
    dom: &SampleDomain,
    fields: Option<Vec<PolyVectorField>>,
    names: &[String],
) -> Result<Value, CliError> {
    match sufficient_conditions_check(tau, omega, dom, fields, None) {
        Ok(s) => Ok(json!({
            "available": true,
            "source": match s.source {
                FieldSource::Provided => "provided",
                FieldSource::Computed => "computed",
            },
            "kernel_fields": render_fields(&s.kernel_fields, names),
            "involutive": s.involutive,
            "kernel_pairs_condition": s.kernel_pairs_condition,
            "bracket_condition": s.bracket_condition,
            "holds": s.holds,
        })),
        Err(Error::SpanningFieldsUnavailable(reason)) => Ok(json!({ "available": false, "reason": reason })),
        Err(e) => Err(e.into()),
    }
}

fn parity_change(mut ctx: Ctx) -> Result<Report, CliError> {
    let (tau, omega) = ctx.pair()?;
    let f = ctx.function()?;
    let fields = ctx.fields()?;
    let dom = ctx.domain()?;
    let rep = parity_change_check(&tau, &omega, &f, &dom)?;
    let sufficient = sufficient_summary(&tau, &omega, &dom, fields, ctx.names())?;

    let summary = json!({
        "holds": rep.holds,
        "conformal_odd_everywhere": rep.conformal_odd_everywhere,
        "cross_check": rep.cross_check,
        "conformal_classes": classes(&rep.conformal.classes),
        "sufficient_conditions": sufficient,
    });
    let points = rep
        .points
        .iter()
        .map(|(p, c)| {
            json!({
                "point": rationals(p),
                "liouville_residual": rational(&c.liouville_residual),
                "kernel_residuals": rationals(&c.kernel_residuals),
                "holds": c.holds,
                "base_class": c.base_class,
                "conformal_class": c.conformal_class,
            })
        })
        .collect();
    ctx.finish(points, summary)
}

fn odd_preserve(mut ctx: Ctx) -> Result<Report, CliError> {
    let (tau, omega) = ctx.pair()?;
    let f = ctx.function()?;
    let dom = ctx.domain()?;
    let rep = odd_preservation_check(&tau, &omega, &f, &dom)?;
    let summary = json!({
        "holds": rep.holds,
        "cross_check": rep.cross_check,
        "conformal_classes": classes(&rep.conformal.classes),
    });
    let points = rep
        .points
        .iter()
        .map(|(p, c)| {
            json!({
                "point": rationals(p),
                "residuals": rationals(&c.residuals),
                "holds": c.holds,
                "reeb_identity": c.reeb_identity,
                "base_class": c.base_class,
                "conformal_class": c.conformal_class,
            })
        })
        .collect();
    ctx.finish(points, summary)
}

fn hamiltonian(mut ctx: Ctx) -> Result<Report, CliError> {
    let eta = ctx.tau()?;
    let h = ctx.function()?;
    let scale = match ctx.flags.scale.clone() {
        Some(name) => {
            let g = ctx.ws.function(&name)?.clone();
            ctx.note("scale", name);
            Some(g)
        }
        None => None,
    };
    let dom = ctx.domain()?;

    let mut points = Vec::new();
    let mut consistent_count = 0;
    let mut implication = true;
    for p in dom.points() {
        let sol = hamiltonian_solutions_at(&eta, &h, &p)?;
        let nec = necessary_conditions_at(&eta, &h, &p)?;
        let eta_vanishes = eta.evaluate(&p)?.is_zero();
        if sol.consistent() {
            consistent_count += 1;
            if (nec.parity == Parity::Odd || !eta_vanishes) && !nec.all_zero {
                implication = false;
            }
        }
        let residuals: Map<String, Value> = nec.residuals.iter().map(|(k, v)| (k.clone(), rational(v))).collect();
        points.push(json!({
            "point": rationals(&p),
            "consistent": sol.consistent(),
            "solutions": report::affine(sol.solutions.as_ref()),
            "eq58_with_clause_agrees": sol.eq58_with_clause_agrees,
            "eq58_alone_agrees": sol.eq58_alone_agrees,
            "class": nec.class,
            "parity": nec.parity.as_str(),
            "residuals": residuals,
            "residuals_vanish": nec.all_zero,
        }));
    }
    let samples = points.len();
    let mut summary = Map::new();
    summary.insert("samples".into(), samples.into());
    summary.insert("consistent_points".into(), consistent_count.into());
    summary.insert("consistent_everywhere".into(), (consistent_count == samples).into());
    summary.insert("consistent_implies_residuals_vanish".into(), implication.into());
    summary.insert(
        "eq58_agrees".into(),
        points
            .iter()
            .all(|p| p["eq58_with_clause_agrees"] == true && p["eq58_alone_agrees"] != false)
            .into(),
    );
    if let Some(g) = scale {
        let eq = conformal_equivalence_check(&eta, &h, &g, &dom)?;
        summary.insert(
            "conformal_equivalence".into(),
            json!({ "equivalent": eq.equivalent, "mismatch_detected": eq.mismatch_detected }),
        );
    }
    ctx.finish(points, Value::Object(summary))
}

fn constraints(mut ctx: Ctx) -> Result<Report, CliError> {
    let (flag, name) = match (ctx.flags.omega.clone(), ctx.flags.form.clone()) {
        (Some(n), _) => ("omega", n),
        (None, Some(n)) => ("form", n),
        (None, None) => return Err(CliError::MissingFlag("omega")),
    };
    let omega = ctx.named_form(flag, &name, 2)?;
    let h = ctx.function()?;
    let dom = ctx.domain()?;
    let rep = primary_constraint_scan(&omega, &h, &dom)?;
    let count = rep.constraint_points.len();
    let summary = json!({
        "constraint_points": rep.constraint_points.iter().map(|p| rationals(p)).collect::<Vec<_>>(),
        "count": count,
        "samples": rep.points.len(),
        "everywhere": count == rep.points.len(),
        "nowhere": count == 0,
    });
    let points = rep
        .points
        .iter()
        .map(|(p, ok)| json!({ "point": rationals(p), "solvable": ok }))
        .collect();
    ctx.finish(points, summary)
}

fn distribution(fields: &[PolyVectorField], dom: &SampleDomain, names: &[String]) -> Result<Value, CliError> {
    let m = names.len();
    let (involutive, note) = match involutive_at(fields, m, dom) {
        Ok(b) => (json!(b), Value::Null),
        Err(e @ Error::NonConstantSpan { .. }) => (Value::Null, e.to_string().into()),
        Err(e) => return Err(e.into()),
    };
    Ok(json!({ "fields": render_fields(fields, names), "involutive": involutive, "note": note }))
}

fn involutive(mut ctx: Ctx) -> Result<Report, CliError> {
    let names = ctx.names().to_vec();
    let mut summary = Map::new();
    if let Some(fields) = ctx.fields()? {
        let dom = ctx.domain()?;
        summary.insert("fields".into(), distribution(&fields, &dom, &names)?);
    } else {
        let (tau, omega) = ctx.pair()?;
        let dom = ctx.domain()?;
        summary.insert("ker_omega".into(), distribution(&kernel_fields(&omega)?, &dom, &names)?);
        summary.insert(
            "characteristic".into(),
            distribution(&characteristic_fields(&tau, &omega)?, &dom, &names)?,
        );
        summary.insert("extended".into(), distribution(&extended_fields(&tau, &omega)?, &dom, &names)?);
    }
    ctx.finish(Vec::new(), Value::Object(summary))
}

fn lemma62(mut ctx: Ctx) -> Result<Report, CliError> {
    let (tau, omega) = ctx.pair()?;
    let f = ctx.function()?;
    let ns: Vec<usize> = match ctx.flags.n {
        Some(0) => {
            return Err(CliError::BadFlag {
                flag: "n",
                message: "must be at least 1".into(),
            })
        }
        Some(n) => {
            ctx.note("n", n);
            vec![n]
        }
        None => vec![1, 2, 3],
    };
    let mut checks = Vec::new();
    let mut holds = true;
    for n in ns {
        let c = wedge_power_identity_check(&tau, &omega, &f, n)?;
        holds &= c.power_identity && c.top_identity;
        checks.push(json!({ "n": c.n, "power_identity": c.power_identity, "top_identity": c.top_identity }));
    }
    ctx.finish(Vec::new(), json!({ "checks": checks, "holds": holds }))
}
