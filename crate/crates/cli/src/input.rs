//! Description files: one JSON object per file, with exactly one of
//! `algebra`, `poset`, `lie`, `deform` (or `module` for coefficient files)
//! next to an optional `field`.

use std::sync::Arc;

use serde_json::{Map, Value};

use selfdual::deform::{DeformSpec, Hbar};
use selfdual::exact::{Field, Matrix, Scalar};
use selfdual::lie::{killing_form, orthogonal_of_form, semidirect, LieAlgebra, LieModule};
use selfdual::{Algebra, Bimodule, GroupTable, Poset};

use crate::error::{CliError, CliResult};

const MONOMIAL_DEGREE_CAP: usize = 64;

#[derive(Clone, Debug)]
pub enum Description {
    Algebra(AlgebraDesc),
    Poset { field: Field, poset: Poset },
    Lie(LieDesc),
    Deform(DeformSpec),
}

#[derive(Clone, Debug)]
pub struct AlgebraDesc {
    pub kind: String,
    pub algebra: Arc<Algebra>,
}

#[derive(Clone, Debug)]
pub struct LieDesc {
    pub kind: String,
    pub algebra: Arc<LieAlgebra>,
    /// Block form when the algebra was built as a semidirect product.
    pub block_form: Option<Matrix>,
}

impl Description {
    pub fn kind(&self) -> &str {
        match self {
            Description::Algebra(_) => "algebra",
            Description::Poset { .. } => "poset",
            Description::Lie(_) => "lie",
            Description::Deform(_) => "deform",
        }
    }
}

/// Parses and validates a description file.
pub fn parse_input(text: &str) -> CliResult<(Value, Description)> {
    let value: Value = serde_json::from_str(text)?;
    let desc = describe(&value)?;
    Ok((value, desc))
}

pub fn describe(value: &Value) -> CliResult<Description> {
    let top = object(value, "$")?;
    let body = ["algebra", "poset", "lie", "deform"]
        .into_iter()
        .filter(|k| top.contains_key(*k))
        .collect::<Vec<_>>();
    allow_keys(top, "$", &["field", "algebra", "poset", "lie", "deform"])?;
    let key = match body.as_slice() {
        [k] => *k,
        [] => return Err(CliError::schema("$", "expected one of algebra, poset, lie, deform")),
        _ => return Err(CliError::schema("$", format!("conflicting keys {}", body.join(", ")))),
    };
    let path = format!("$.{key}");
    let field = match top.get("field") {
        Some(f) => parse_field(f, "$.field")?,
        None if key == "deform" => Field::Rational,
        None => return Err(CliError::schema("$", "missing key \"field\"")),
    };
    match key {
        "algebra" => {
            let (kind, algebra) = parse_algebra(&top[key], &path, field)?;
            Ok(Description::Algebra(AlgebraDesc {
                kind,
                algebra: Arc::new(algebra),
            }))
        }
        "poset" => Ok(Description::Poset {
            field,
            poset: parse_poset(object(&top[key], &path)?, &path)?,
        }),
        "lie" => Ok(Description::Lie(parse_lie(&top[key], &path, field)?)),
        _ => {
            if field != Field::Rational {
                return Err(CliError::schema("$.field", "deformations are defined over Q only"));
            }
            Ok(Description::Deform(parse_deform(&top[key], &path)?))
        }
    }
}

/// A coefficient file: `{"module": {"left": [...], "right": [...]}}` over an
/// associative algebra.
pub fn parse_bimodule(text: &str, algebra: &Arc<Algebra>) -> CliResult<(Value, Bimodule)> {
    let value: Value = serde_json::from_str(text)?;
    let m = module_object(&value, algebra.field())?;
    allow_keys(m, "$.module", &["left", "right"])?;
    let left = matrices(need(m, "$.module", "left")?, "$.module.left", algebra.field())?;
    let right = matrices(need(m, "$.module", "right")?, "$.module.right", algebra.field())?;
    let b = Bimodule::new(algebra.clone(), left, right).map_err(CliError::core("bimodule"))?;
    Ok((value, b))
}

/// A Lie module file: `{"module": {"actions": [...]}}`.
pub fn parse_lie_module(text: &str, g: &Arc<LieAlgebra>) -> CliResult<(Value, LieModule)> {
    let value: Value = serde_json::from_str(text)?;
    let m = module_object(&value, g.field())?;
    allow_keys(m, "$.module", &["actions"])?;
    let actions = matrices(need(m, "$.module", "actions")?, "$.module.actions", g.field())?;
    let module = LieModule::new(g.clone(), actions).map_err(CliError::core("lie"))?;
    Ok((value, module))
}

fn module_object(value: &Value, field: Field) -> CliResult<&Map<String, Value>> {
    let top = object(value, "$")?;
    allow_keys(top, "$", &["field", "module"])?;
    if let Some(f) = top.get("field") {
        let f = parse_field(f, "$.field")?;
        if f != field {
            return Err(CliError::core("input")(selfdual::Error::FieldMismatch(field, f)));
        }
    }
    object(need(top, "$", "module")?, "$.module")
}

pub fn parse_field(v: &Value, path: &str) -> CliResult<Field> {
    let o = object(v, path)?;
    match string(need(o, path, "kind")?, &format!("{path}.kind"))? {
        "Q" => {
            allow_keys(o, path, &["kind"])?;
            Ok(Field::Rational)
        }
        "GF" => {
            allow_keys(o, path, &["kind", "p"])?;
            let p = need(o, path, "p")?
                .as_u64()
                .ok_or_else(|| CliError::schema(&format!("{path}.p"), "expected a positive integer"))?;
            Field::prime(p).map_err(CliError::core("input"))
        }
        other => Err(CliError::schema(&format!("{path}.kind"), format!("unknown field kind {other:?}"))),
    }
}

fn parse_algebra(v: &Value, path: &str, field: Field) -> CliResult<(String, Algebra)> {
    let o = object(v, path)?;
    let kind = string(need(o, path, "kind")?, &format!("{path}.kind"))?.to_string();
    let core = CliError::core("algebra");
    let algebra = match kind.as_str() {
        "structure_constants" => {
            allow_keys(o, path, &["kind", "table", "unit", "labels"])?;
            let tpath = format!("{path}.table");
            let rows = array(need(o, path, "table")?, &tpath)?;
            let dim = rows.len();
            let mut table = Vec::with_capacity(dim);
            for (i, row) in rows.iter().enumerate() {
                let rpath = format!("{tpath}[{i}]");
                let row = array(row, &rpath)?;
                let row = row
                    .iter()
                    .enumerate()
                    .map(|(j, v)| scalars(v, &format!("{rpath}[{j}]"), field))
                    .collect::<CliResult<Vec<_>>>()?;
                table.push(row);
            }
            let unit = scalars(need(o, path, "unit")?, &format!("{path}.unit"), field)?;
            let a = Algebra::from_structure_constants(field, dim, table, unit).map_err(core)?;
            match o.get("labels") {
                Some(l) => a
                    .with_labels(strings(l, &format!("{path}.labels"))?)
                    .map_err(CliError::core("algebra"))?,
                None => a,
            }
        }
        "poset" => {
            allow_keys(o, path, &["kind", "elements", "relations"])?;
            Algebra::poset(&parse_poset(o, path)?, field)
        }
        "group" => {
            allow_keys(o, path, &["kind", "table", "cyclic", "symmetric", "labels"])?;
            let given: Vec<&str> = ["table", "cyclic", "symmetric"]
                .into_iter()
                .filter(|k| o.contains_key(*k))
                .collect();
            let group = match given.as_slice() {
                ["table"] => {
                    let tpath = format!("{path}.table");
                    let rows = array(&o["table"], &tpath)?
                        .iter()
                        .enumerate()
                        .map(|(i, r)| indices(r, &format!("{tpath}[{i}]")))
                        .collect::<CliResult<Vec<_>>>()?;
                    GroupTable::new(rows).map_err(core)?
                }
                ["cyclic"] => GroupTable::cyclic(positive(&o["cyclic"], &format!("{path}.cyclic"))?),
                ["symmetric"] => GroupTable::symmetric(positive(&o["symmetric"], &format!("{path}.symmetric"))?),
                _ => return Err(CliError::schema(path, "give exactly one of table, cyclic, symmetric")),
            };
            let labels = o.get("labels").map(|l| strings(l, &format!("{path}.labels"))).transpose()?;
            Algebra::group(group, field, labels).map_err(core)?
        }
        "truncated_poly" => {
            allow_keys(o, path, &["kind", "n"])?;
            Algebra::truncated_poly(natural(need(o, path, "n")?, &format!("{path}.n"))?, field)
        }
        "matrix" => {
            allow_keys(o, path, &["kind", "n"])?;
            Algebra::matrix_algebra(field, positive(need(o, path, "n")?, &format!("{path}.n"))?)
        }
        "monomial_quotient" => {
            allow_keys(o, path, &["kind", "vars", "relations", "degree_cap"])?;
            let vars = strings(need(o, path, "vars")?, &format!("{path}.vars"))?;
            let rpath = format!("{path}.relations");
            let relations = array(need(o, path, "relations")?, &rpath)?
                .iter()
                .enumerate()
                .map(|(i, r)| monomial(r, &format!("{rpath}[{i}]"), &vars))
                .collect::<CliResult<Vec<_>>>()?;
            let cap = match o.get("degree_cap") {
                Some(c) => positive(c, &format!("{path}.degree_cap"))?,
                None => MONOMIAL_DEGREE_CAP,
            };
            Algebra::monomial_quotient(field, &vars, &relations, cap).map_err(core)?
        }
        "tensor" | "direct_sum" => {
            allow_keys(o, path, &["kind", "factors"])?;
            let fpath = format!("{path}.factors");
            let factors = array(need(o, path, "factors")?, &fpath)?;
            if factors.is_empty() {
                return Err(CliError::schema(&fpath, "expected at least one factor"));
            }
            let mut acc: Option<Algebra> = None;
            for (i, f) in factors.iter().enumerate() {
                let (_, b) = parse_algebra(f, &format!("{fpath}[{i}]"), field)?;
                acc = Some(match acc {
                    None => b,
                    Some(a) if kind == "tensor" => a.tensor(&b).map_err(CliError::core("algebra"))?,
                    Some(a) => a.direct_sum(&b).map_err(CliError::core("algebra"))?,
                });
            }
            acc.expect("nonempty")
        }
        "opposite" => {
            allow_keys(o, path, &["kind", "algebra"])?;
            let (_, inner) = parse_algebra(need(o, path, "algebra")?, &format!("{path}.algebra"), field)?;
            inner.opposite()
        }
        other => {
            return Err(CliError::schema(
                &format!("{path}.kind"),
                format!("unknown algebra kind {other:?}"),
            ))
        }
    };
    Ok((kind, algebra))
}

fn parse_poset(o: &Map<String, Value>, path: &str) -> CliResult<Poset> {
    if !o.contains_key("kind") {
        allow_keys(o, path, &["elements", "relations"])?;
    }
    let elements = strings(need(o, path, "elements")?, &format!("{path}.elements"))?;
    let rpath = format!("{path}.relations");
    let relations = match o.get("relations") {
        None => Vec::new(),
        Some(r) => array(r, &rpath)?
            .iter()
            .enumerate()
            .map(|(i, pair)| {
                let p = strings(pair, &format!("{rpath}[{i}]"))?;
                match <[String; 2]>::try_from(p) {
                    Ok([a, b]) => Ok((a, b)),
                    Err(_) => Err(CliError::schema(&format!("{rpath}[{i}]"), "expected a pair [lower, upper]")),
                }
            })
            .collect::<CliResult<Vec<_>>>()?,
    };
    Poset::new(&elements, &relations).map_err(CliError::core("poset"))
}

fn parse_lie(v: &Value, path: &str, field: Field) -> CliResult<LieDesc> {
    let o = object(v, path)?;
    let kind = string(need(o, path, "kind")?, &format!("{path}.kind"))?.to_string();
    let core = CliError::core("lie");
    let mut block_form = None;
    let algebra = match kind.as_str() {
        "structure_constants" => {
            allow_keys(o, path, &["kind", "basis", "brackets"])?;
            let basis = strings(need(o, path, "basis")?, &format!("{path}.basis"))?;
            let index = |name: &str, at: &str| {
                basis
                    .iter()
                    .position(|b| b == name)
                    .ok_or_else(|| CliError::schema(at, format!("unknown basis element {name:?}")))
            };
            let bpath = format!("{path}.brackets");
            let mut brackets = Vec::new();
            for (n, entry) in array(need(o, path, "brackets")?, &bpath)?.iter().enumerate() {
                let at = format!("{bpath}[{n}]");
                let parts = array(entry, &at)?;
                let [a, b, value] = parts.as_slice() else {
                    return Err(CliError::schema(&at, "expected [x, y, {\"z\": \"c\", ...}]"));
                };
                let i = index(string(a, &at)?, &at)?;
                let j = index(string(b, &at)?, &at)?;
                let mut terms = Vec::new();
                for (k, c) in object(value, &format!("{at}[2]"))? {
                    terms.push((index(k, &at)?, scalar(c, &format!("{at}[2].{k}"), field)?));
                }
                brackets.push((i, j, terms));
            }
            let labels: Vec<&str> = basis.iter().map(String::as_str).collect();
            LieAlgebra::from_brackets(field, &labels, &brackets).map_err(core)?
        }
        "sl2" | "so3" | "nonabelian2" => {
            allow_keys(o, path, &["kind"])?;
            match kind.as_str() {
                "sl2" => LieAlgebra::sl2(field),
                "so3" => LieAlgebra::so3(field),
                _ => LieAlgebra::nonabelian2(field),
            }
        }
        "abelian" => {
            allow_keys(o, path, &["kind", "dim"])?;
            LieAlgebra::abelian(field, natural(need(o, path, "dim")?, &format!("{path}.dim"))?)
        }
        "orthogonal_of_form" => {
            allow_keys(o, path, &["kind", "gram"])?;
            let gram = matrix(need(o, path, "gram")?, &format!("{path}.gram"), field)?;
            orthogonal_of_form(&gram).map_err(core)?
        }
        "semidirect" => {
            allow_keys(o, path, &["kind", "algebra", "module", "algebra_form", "module_form"])?;
            let inner = parse_lie(need(o, path, "algebra")?, &format!("{path}.algebra"), field)?;
            let g = inner.algebra;
            let module = parse_inline_module(need(o, path, "module")?, &format!("{path}.module"), &g)?;
            let fpath = format!("{path}.algebra_form");
            let form_g = match o.get("algebra_form") {
                None => killing_form(&g),
                Some(Value::String(s)) if s == "killing" => killing_form(&g),
                Some(m) => matrix(m, &fpath, field)?,
            };
            let form_v = matrix(need(o, path, "module_form")?, &format!("{path}.module_form"), field)?;
            let s = semidirect(&g, &module, &form_g, &form_v).map_err(core)?;
            block_form = Some(s.form);
            s.algebra
        }
        other => {
            return Err(CliError::schema(
                &format!("{path}.kind"),
                format!("unknown Lie algebra kind {other:?}"),
            ))
        }
    };
    Ok(LieDesc {
        kind,
        algebra: Arc::new(algebra),
        block_form,
    })
}

fn parse_inline_module(v: &Value, path: &str, g: &Arc<LieAlgebra>) -> CliResult<LieModule> {
    let o = object(v, path)?;
    let kind = string(need(o, path, "kind")?, &format!("{path}.kind"))?;
    match kind {
        "adjoint" => {
            allow_keys(o, path, &["kind"])?;
            Ok(LieModule::adjoint(g.clone()))
        }
        "trivial" => {
            allow_keys(o, path, &["kind", "dim"])?;
            Ok(LieModule::trivial(g.clone(), natural(need(o, path, "dim")?, &format!("{path}.dim"))?))
        }
        "actions" => {
            allow_keys(o, path, &["kind", "actions"])?;
            let actions = matrices(need(o, path, "actions")?, &format!("{path}.actions"), g.field())?;
            LieModule::new(g.clone(), actions).map_err(CliError::core("lie"))
        }
        other => Err(CliError::schema(
            &format!("{path}.kind"),
            format!("unknown module kind {other:?}"),
        )),
    }
}

fn parse_deform(v: &Value, path: &str) -> CliResult<DeformSpec> {
    let o = object(v, path)?;
    allow_keys(o, path, &["n", "p", "hbar"])?;
    let n = positive(need(o, path, "n")?, &format!("{path}.n"))?;
    let p = scalars(need(o, path, "p")?, &format!("{path}.p"), Field::Rational)?;
    let hbar = match o.get("hbar") {
        None => Hbar::Symbolic,
        Some(h) => parse_hbar(string(h, &format!("{path}.hbar"))?)?,
    };
    DeformSpec::new(n, p, hbar).map_err(CliError::core("deform"))
}

/// `"symbolic"` or a rational literal.
pub fn parse_hbar(text: &str) -> CliResult<Hbar> {
    if text == "symbolic" {
        return Ok(Hbar::Symbolic);
    }
    Ok(Hbar::Numeric(Field::Rational.parse(text).map_err(CliError::core("deform"))?))
}

/// Exponent vector or a product such as `"x^2*y"`.
fn monomial(v: &Value, path: &str, vars: &[String]) -> CliResult<Vec<usize>> {
    if let Value::String(s) = v {
        let mut exps = vec![0; vars.len()];
        for factor in s.split('*').map(str::trim) {
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::schema(path, format!("bad exponent in {s:?}")))?,
                ),
                None => (factor, 1),
            };
            let k = vars
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| CliError::schema(path, format!("unknown variable {name:?}")))?;
            exps[k] += e;
        }
        return Ok(exps);
    }
    let e = indices(v, path)?;
    if e.len() != vars.len() {
        return Err(CliError::schema(path, format!("expected {} exponents", vars.len())));
    }
    Ok(e)
}

fn object<'a>(v: &'a Value, path: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> CliResult<&'a str> {
    v.as_str().ok_or_else(|| CliError::schema(path, "expected a string"))
}

fn need<'a>(o: &'a Map<String, Value>, path: &str, key: &str) -> CliResult<&'a Value> {
    o.get(key)
        .ok_or_else(|| CliError::schema(path, format!("missing key {key:?}")))
}

fn allow_keys(o: &Map<String, Value>, path: &str, keys: &[&str]) -> CliResult<()> {
    match o.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(CliError::schema(path, format!("unexpected key {k:?}"))),
        None => Ok(()),
    }
}

fn natural(v: &Value, path: &str) -> CliResult<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| CliError::schema(path, "expected a non-negative integer"))
}

fn positive(v: &Value, path: &str) -> CliResult<usize> {
    match natural(v, path)? {
        0 => Err(CliError::schema(path, "expected a positive integer")),
        n => Ok(n),
    }
}

fn indices(v: &Value, path: &str) -> CliResult<Vec<usize>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| natural(x, &format!("{path}[{i}]")))
        .collect()
}

fn strings(v: &Value, path: &str) -> CliResult<Vec<String>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &format!("{path}[{i}]")).map(str::to_string))
        .collect()
}

/// Scalars are strings (`"3"`, `"-1/2"`); bare JSON numbers are refused.
fn scalar(v: &Value, path: &str, field: Field) -> CliResult<Scalar> {
    let s = v
        .as_str()
        .ok_or_else(|| CliError::schema(path, "expected a rational as a string, e.g. \"1/2\""))?;
    field.parse(s).map_err(CliError::core("input"))
}

fn scalars(v: &Value, path: &str, field: Field) -> CliResult<Vec<Scalar>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("{path}[{i}]"), field))
        .collect()
}

fn matrix(v: &Value, path: &str, field: Field) -> CliResult<Matrix> {
    let rows = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| scalars(r, &format!("{path}[{i}]"), field))
        .collect::<CliResult<Vec<_>>>()?;
    Matrix::from_rows(field, rows).map_err(CliError::core("input"))
}

fn matrices(v: &Value, path: &str, field: Field) -> CliResult<Vec<Matrix>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(m, &format!("{path}[{i}]"), field))
        .collect()
}
