use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use selfdual::deform::{
    certify_determinant, deformed_algebra, deformed_form, deformed_form_is_dualizing, jump_scan,
    multiplicity_partition, DeformSpec, DeformedForm, Hbar,
};
use selfdual::exact::{Field, SearchStrategy, Scalar};
use selfdual::frobenius::{group_ring_form, is_symmetric_frobenius, quasi_self_duality};
use selfdual::hochschild::cohomology_dims;
use selfdual::lie::{
    ce_cohomology_dims, check_invariant, dual_module, invariant_form_space, is_frobenius_lie, kirillov_form,
    killing_form, skew_dualizing_search, LieModule,
};
use selfdual::simplicial::compare;
use selfdual::{Algebra, Bimodule, ModelKind, ModelTag, Origin};

use crate::error::{CliError, CliResult};
use crate::input::{parse_bimodule, parse_lie_module, AlgebraDesc, Description, LieDesc};
use crate::report::{self, Report, Table};

pub struct Loaded {
    pub path: String,
    pub value: Value,
    pub desc: Description,
}

fn base_inputs(input: &Loaded) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("file".into(), Value::from(input.path.clone()));
    m
}

fn finish_inputs(report: &mut Report, input: &Loaded) {
    report.inputs.insert("description".into(), input.value.clone());
}

fn algebra_of(input: &Loaded, command: &str) -> CliResult<AlgebraDesc> {
    match &input.desc {
        Description::Algebra(a) => Ok(a.clone()),
        other => Err(CliError::Usage(format!(
            "{command} needs an algebra description, {} holds a {} description",
            input.path,
            other.kind()
        ))),
    }
}

fn model_kind(tag: ModelTag, algebra: &Algebra) -> CliResult<ModelKind> {
    match tag {
        ModelTag::Full => Ok(ModelKind::Full),
        ModelTag::Normalized => Ok(ModelKind::Normalized),
        ModelTag::Relative => ModelKind::poset_relative(algebra).map_err(CliError::core("hochschild")),
    }
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Read {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn degree_table(title: &str, dims: &[usize]) -> Table {
    let mut t = Table::new(title, &["n", "dim"]);
    for (n, d) in dims.iter().enumerate() {
        t.push(vec![n.to_string(), d.to_string()]);
    }
    t
}

fn strategy(s: &SearchStrategy) -> String {
    match s {
        SearchStrategy::Grid { bound } => format!("grid 0..={bound}"),
        SearchStrategy::Exhaustive { p } => format!("exhaustive over GF({p})"),
    }
}

pub fn cohomology(input: &Loaded, coefficients: &[String], max_degree: usize, model: ModelTag) -> CliResult<Report> {
    let a = algebra_of(input, "cohomology")?.algebra;
    let mut report = Report::new("cohomology", base_inputs(input));
    report.inputs.insert("coefficients".into(), json!(coefficients));
    report.inputs.insert("max_degree".into(), json!(max_degree));
    report.inputs.insert("model".into(), json!(model.to_string()));
    let kind = model_kind(model, &a)?;
    let mut modules = Map::new();
    let mut series = Vec::new();
    for c in coefficients {
        let m = match c.as_str() {
            "self" => Bimodule::regular(a.clone()),
            "dual-op" => Bimodule::dual_op(a.clone()),
            path => {
                let (value, m) = parse_bimodule(&read(path)?, &a)?;
                modules.insert(path.to_string(), value);
                m
            }
        };
        let dims = cohomology_dims(a.clone(), Arc::new(m), max_degree, kind.clone())
            .map_err(CliError::core("hochschild"))?;
        report.tables.push(degree_table(&format!("H^n(A, {c})"), &dims));
        report.dims(c, &dims);
        series.push((c.clone(), dims));
    }
    report.witness("algebra", algebra_summary(&a));
    if let (Some((_, s)), Some((_, d))) = (
        series.iter().find(|(c, _)| c == "self"),
        series.iter().find(|(c, _)| c == "dual-op"),
    ) {
        report.witness("self_matches_dual_op", Value::Bool(s == d));
    }
    if !modules.is_empty() {
        report.inputs.insert("modules".into(), Value::Object(modules));
    }
    finish_inputs(&mut report, input);
    Ok(report)
}

pub fn compare_job(input: &Loaded, max_degree: usize) -> CliResult<Report> {
    let (field, poset) = match &input.desc {
        Description::Poset { field, poset } => (*field, poset.clone()),
        Description::Algebra(a) => match a.algebra.origin() {
            Origin::Poset(layout) => (a.algebra.field(), layout.poset.clone()),
            _ => return Err(CliError::core("simplicial")(selfdual::Error::NotPosetAlgebra)),
        },
        other => {
            return Err(CliError::Usage(format!(
                "compare needs a poset description, {} holds a {} description",
                input.path,
                other.kind()
            )))
        }
    };
    let mut report = Report::new("compare", base_inputs(input));
    report.inputs.insert("max_degree".into(), json!(max_degree));
    let c = compare(&poset, field, max_degree).map_err(CliError::core("simplicial"))?;
    let mut t = Table::new(
        "relative model vs nerve",
        &["n", "H(A,A)", "H(A,A^vop)", "H(nerve)", "agree"],
    );
    for r in &c.rows {
        t.push(vec![
            r.degree.to_string(),
            r.hochschild.to_string(),
            r.hochschild_dual_op.to_string(),
            r.simplicial.to_string(),
            if r.agrees() { "yes" } else { "no" }.to_string(),
        ]);
    }
    report.tables.push(t);
    report.dims("hochschild", &c.column(|r| r.hochschild));
    report.dims("hochschild_dual_op", &c.column(|r| r.hochschild_dual_op));
    report.dims("simplicial", &c.column(|r| r.simplicial));
    report.check("regular_matches_nerve", c.regular_agrees());
    report.check(
        "dual_op_matches_nerve",
        c.rows.iter().all(|r| r.hochschild_dual_op == r.simplicial),
    );
    finish_inputs(&mut report, input);
    Ok(report)
}

pub fn frobenius(input: &Loaded, max_degree: Option<usize>, model: ModelTag) -> CliResult<Report> {
    let a = algebra_of(input, "frobenius")?.algebra;
    let mut report = Report::new("frobenius", base_inputs(input));
    if let Some(n) = max_degree {
        report.inputs.insert("max_degree".into(), json!(n));
        report.inputs.insert("model".into(), json!(model.to_string()));
    }
    let stage = CliError::core("frobenius");
    let r = is_symmetric_frobenius(&a).map_err(stage)?;
    report.witness("algebra", algebra_summary(&a));
    report.witness("dualizing_space_dim", json!(r.search.space_dim));
    report.witness("search", json!(strategy(&r.search.strategy)));
    report.witness("evaluations", json!(r.search.evaluations));
    report.witness("self_dual", Value::Bool(r.is_symmetric_frobenius()));
    report.check("search_consistent", r.consistent());
    if let Some(w) = &r.search.witness {
        report.witness("gram", report::matrix(w.form.gram()));
        if let Some(f) = &r.functional {
            report.witness("functional", report::vector(f));
        }
        report.check("dualizing_conditions", w.form.satisfies_dualizing_conditions());
        report.check("symmetric", w.form.is_symmetric());
        report.check("induced_morphism", w.morphism_verified);
        report.check("induced_invertible", w.invertible);
        report.check("form_from_functional", r.form_from_functional == Some(true));
    }
    if a.group_table().is_some() {
        let g = group_ring_form(&a).map_err(CliError::core("frobenius"))?;
        report.check("group_ring_form_dualizing", g.is_dualizing());
    }
    if let Some(n) = max_degree {
        let kind = model_kind(model, &a)?;
        let q = quasi_self_duality(&a, n, kind).map_err(CliError::core("hochschild"))?;
        report.tables.push(degree_table("H^n(A, self)", &q.regular));
        report.tables.push(degree_table("H^n(A, dual-op)", &q.dual_op));
        report.dims("self", &q.regular);
        report.dims("dual-op", &q.dual_op);
        report.witness("quasi_self_duality", json!(q.to_string()));
    }
    finish_inputs(&mut report, input);
    Ok(report)
}

pub fn lie(input: &Loaded, coefficients: &[String], max_degree: Option<usize>) -> CliResult<Report> {
    let LieDesc {
        kind,
        algebra: g,
        block_form,
    } = match &input.desc {
        Description::Lie(l) => l.clone(),
        other => {
            return Err(CliError::Usage(format!(
                "lie needs a Lie algebra description, {} holds a {} description",
                input.path,
                other.kind()
            )))
        }
    };
    let max_degree = max_degree.unwrap_or(g.dim());
    let mut report = Report::new("lie", base_inputs(input));
    report.inputs.insert("coefficients".into(), json!(coefficients));
    report.inputs.insert("max_degree".into(), json!(max_degree));
    let stage = CliError::core("lie");
    let mut modules = Map::new();
    for c in coefficients {
        let m = match c.as_str() {
            "self" => LieModule::adjoint(g.clone()),
            "dual-op" => dual_module(&LieModule::adjoint(g.clone())),
            "trivial" => LieModule::trivial(g.clone(), 1),
            path => {
                let (value, m) = parse_lie_module(&read(path)?, &g)?;
                modules.insert(path.to_string(), value);
                m
            }
        };
        let dims = ce_cohomology_dims(&m, max_degree).map_err(CliError::core("lie"))?;
        report.tables.push(degree_table(&format!("H^n(g, {c})"), &dims));
        report.dims(c, &dims);
    }

    report.witness(
        "algebra",
        json!({"kind": kind, "field": g.field().to_string(), "dim": g.dim(), "basis": g.labels()}),
    );
    let k = killing_form(&g);
    let kc = check_invariant(&g, &k).map_err(stage)?;
    report.witness("killing_form", report::matrix(&k));
    report.witness("killing_nondegenerate", Value::Bool(kc.nondegenerate));
    report.check("killing_invariant", kc.invariant());
    report.witness("invariant_forms_dim", json!(invariant_form_space(&g).len()));

    let skew = skew_dualizing_search(&g).map_err(CliError::core("lie"))?;
    report.witness("skew_search", json!(strategy(&skew.strategy)));
    match &skew.witness {
        Some(w) => {
            report.witness("skew_dualizing_form", report::matrix(&w.matrix));
            let c = check_invariant(&g, &w.matrix).map_err(CliError::core("lie"))?;
            report.check("skew_form_dualizing", c.dualizing());
        }
        None => report.witness("skew_dualizing_form", Value::Null),
    }

    let fro = is_frobenius_lie(&g).map_err(CliError::core("lie"))?;
    report.witness("frobenius_lie", Value::Bool(fro.witness.is_some()));
    if let Some(w) = &fro.witness {
        report.witness("frobenius_functional", report::vector(&w.coefficients));
        let kir = kirillov_form(&g, &w.coefficients).map_err(CliError::core("lie"))?;
        report.check("kirillov_nondegenerate", kir.is_invertible());
    }

    if let Some(form) = &block_form {
        let c = check_invariant(&g, form).map_err(CliError::core("lie"))?;
        report.witness("block_form", report::matrix(form));
        if let Some((x, a, b)) = c.failure {
            let l = g.labels();
            report.witness("block_form_failure", json!([l[x], l[a], l[b]]));
        }
        report.check("block_form_invariant", c.invariant());
        report.check("block_form_nondegenerate", c.nondegenerate);
    }
    if !modules.is_empty() {
        report.inputs.insert("modules".into(), Value::Object(modules));
    }
    finish_inputs(&mut report, input);
    Ok(report)
}

pub struct DeformOptions {
    pub hbar: Option<Hbar>,
    pub samples: Vec<Scalar>,
    pub max_degree: usize,
    pub model: ModelTag,
}

pub fn deform(input: &Loaded, opts: &DeformOptions) -> CliResult<Report> {
    let spec = match &input.desc {
        Description::Deform(s) => s.clone(),
        other => {
            return Err(CliError::Usage(format!(
                "deform needs a deformation description, {} holds a {} description",
                input.path,
                other.kind()
            )))
        }
    };
    let spec = match &opts.hbar {
        Some(h) => spec.with_hbar(h.clone()).map_err(CliError::core("deform"))?,
        None => spec,
    };
    let mut report = Report::new("deform", base_inputs(input));
    report.inputs.insert("hbar".into(), json!(hbar_text(spec.hbar())));
    if !opts.samples.is_empty() {
        report.inputs.insert("samples".into(), report::vector(&opts.samples));
    }
    let stage = CliError::core("deform");
    report.witness("relation", json!(relation_text(&spec)));
    match deformed_form(&spec) {
        DeformedForm::Symbolic(rows) => {
            let gram: Vec<Value> = rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|p| json!(p.display_with("ħ"))).collect()))
                .collect();
            report.witness("gram", Value::Array(gram));
            let c = certify_determinant(&spec).map_err(stage)?;
            report.witness("determinant", json!(c.determinant.display_with("ħ")));
            report.witness("expected_determinant", json!(c.expected.to_string()));
            report.check("determinant_matches", c.determinant_matches);
            report.check("antidiagonal_ones", c.antidiagonal_ones);
            report.check("upper_zero", c.upper_zero);
            report.check("lower_vanish_at_zero", c.lower_vanish_at_zero);
        }
        DeformedForm::Numeric(m) => {
            report.inputs.insert("max_degree".into(), json!(opts.max_degree));
            report.inputs.insert("model".into(), json!(opts.model.to_string()));
            report.witness("gram", report::matrix(&m));
            report.check("dualizing", deformed_form_is_dualizing(&spec).map_err(stage)?);
            let partition = multiplicity_partition(&spec).map_err(CliError::core("deform"))?;
            report.witness("partition", json!(partition.to_string()));
            let a = Arc::new(deformed_algebra(&spec).map_err(CliError::core("deform"))?);
            let kind = model_kind(opts.model, &a)?;
            let dims = cohomology_dims(a.clone(), Arc::new(Bimodule::regular(a.clone())), opts.max_degree, kind)
                .map_err(CliError::core("hochschild"))?;
            report.tables.push(degree_table("H^n(A_hbar, self)", &dims));
            report.dims("self", &dims);
        }
    }
    if !opts.samples.is_empty() {
        let scan = jump_scan(&spec, &opts.samples, None).map_err(CliError::core("deform"))?;
        let mut t = Table::new("multiplicity partition of the relation", &["hbar", "partition"]);
        let mut entries = Vec::new();
        for (h, p) in &scan.entries {
            t.push(vec![h.to_string(), p.to_string()]);
            entries.push(json!({"hbar": h.to_string(), "partition": p.to_string()}));
        }
        report.tables.push(t);
        report.witness("jump_scan", Value::Array(entries));
        report.witness("partition_constant", Value::Bool(scan.constant));
    }
    finish_inputs(&mut report, input);
    Ok(report)
}

fn hbar_text(h: &Hbar) -> String {
    match h {
        Hbar::Numeric(q) => q.to_string(),
        Hbar::Symbolic => "symbolic".into(),
    }
}

fn relation_text(s: &DeformSpec) -> String {
    let p = selfdual::exact::Poly::new(Field::Rational, s.p().to_vec());
    let h = match s.hbar() {
        Hbar::Numeric(q) => q.to_string(),
        Hbar::Symbolic => "ħ".into(),
    };
    format!("t^{} = {h}·({p})", s.n() + 1)
}

pub fn validate(input: &Loaded) -> CliResult<Report> {
    let mut report = Report::new("validate", base_inputs(input));
    report.witness("kind", json!(input.desc.kind()));
    match &input.desc {
        Description::Algebra(a) => {
            let mut w = algebra_summary(&a.algebra);
            w["kind"] = json!(a.kind);
            report.witness("algebra", w);
        }
        Description::Poset { field, poset } => {
            let a = Algebra::poset(poset, *field);
            report.witness(
                "poset",
                json!({"field": field.to_string(), "elements": poset.labels(), "algebra_dim": a.dim()}),
            );
        }
        Description::Lie(l) => {
            report.witness(
                "algebra",
                json!({"kind": l.kind, "field": l.algebra.field().to_string(), "dim": l.algebra.dim(), "basis": l.algebra.labels()}),
            );
        }
        Description::Deform(s) => {
            let mut w = json!({"n": s.n(), "p": report::vector(s.p()), "hbar": hbar_text(s.hbar())});
            if let Hbar::Numeric(_) = s.hbar() {
                let a = deformed_algebra(s).map_err(CliError::core("deform"))?;
                w["dim"] = json!(a.dim());
            }
            report.witness("deform", w);
        }
    }
    report.check("valid", true);
    finish_inputs(&mut report, input);
    Ok(report)
}

fn algebra_summary(a: &Algebra) -> Value {
    json!({
        "field": a.field().to_string(),
        "dim": a.dim(),
        "basis": a.labels(),
        "commutative": a.is_commutative(),
    })
}
