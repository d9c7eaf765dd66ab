//! Deterministic JSON and text renderings of setups, bracket tables and reports.
//!
//! Every JSON document carries `"schema": "walgebra/1"`. Rationals and
//! polynomials are strings in canonical form.

use serde_json::{json, Value};

use crate::finite::gf_name;
use crate::lambda::{LambdaPoly, ZPoly};
use crate::miura::{miura, TensorElem};
use crate::poly::DiffPoly;
use crate::pva::GenTable;
use crate::rational::{fmt_q, Q};
use crate::report::Report;
use crate::setup::GradedSetup;
use crate::walg::{w_name, WAlgebra};

pub const SCHEMA: &str = "walgebra/1";

/// How the parameter z is presented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZMode {
    Formal,
    Value(Q),
}

impl ZMode {
    pub fn parse(text: &str) -> crate::Result<ZMode> {
        if text.trim() == "formal" {
            Ok(ZMode::Formal)
        } else {
            crate::rational::parse_q(text).map(ZMode::Value)
        }
    }

    fn label(&self) -> String {
        match self {
            ZMode::Formal => "formal".into(),
            ZMode::Value(v) => fmt_q(v),
        }
    }
}

fn vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(fmt_q(c))).collect())
}

fn doc(kind: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "kind": kind });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn half(n2: i64) -> String {
    fmt_q(&crate::rational::frac(n2, 2))
}

/// Grades, the g^f basis with δ and Δ, dual bases and `s`.
pub fn setup_json(setup: &GradedSetup) -> Value {
    let alg = setup.alg();
    let jf: Vec<Value> = (0..setup.jf_len())
        .map(|j| {
            json!({
                "j": j,
                "name": gf_name(j),
                "delta": half(setup.delta2(j) as i64),
                "weight": half(setup.weight2(j)),
                "q": vec_json(setup.qj(j)),
                "q_dual": vec_json(setup.qjup(j)),
            })
        })
        .collect();
    let grades: Vec<Value> = setup
        .eigenspace_dims()
        .into_iter()
        .map(|(k2, d)| json!({ "grade": half(k2 as i64), "dim": d }))
        .collect();
    let t = setup.triple();
    doc(
        "setup",
        json!({
            "dim": alg.dim(),
            "labels": alg.labels(),
            "depth": half(setup.depth2() as i64),
            "principal": setup.is_principal(),
            "triple": { "e": vec_json(&t.e), "h": vec_json(&t.h), "f": vec_json(&t.f) },
            "s": vec_json(setup.s()),
            "grades": grades,
            "gf_basis": jf,
        }),
    )
}

pub fn setup_text(setup: &GradedSetup) -> String {
    let alg = setup.alg();
    let mut out = format!("dim {}  depth {}  principal {}\n", alg.dim(), half(setup.depth2() as i64), setup.is_principal());
    out.push_str("grades:");
    for (k2, d) in setup.eigenspace_dims() {
        out.push_str(&format!(" {}:{}", half(k2 as i64), d));
    }
    out.push('\n');
    for j in 0..setup.jf_len() {
        out.push_str(&format!(
            "{}  delta {}  weight {}  q = {}\n",
            gf_name(j),
            half(setup.delta2(j) as i64),
            half(setup.weight2(j)),
            render_vector(alg.labels(), setup.qj(j))
        ));
    }
    out.push_str(&format!("s = {}\n", render_vector(alg.labels(), setup.s())));
    out
}

fn render_vector(labels: &[String], v: &[Q]) -> String {
    let parts: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
        .map(|(c, l)| if num_traits::One::is_one(c) { l.clone() } else { format!("{}*{l}", fmt_q(c)) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// A table of polynomials in z, formal or evaluated.
pub fn z_table_json(kind: &str, table: &[Vec<ZPoly>], z: &ZMode, name: &dyn Fn(usize) -> String) -> Value {
    let mut cells = Vec::new();
    for (i, row) in table.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let cell = match z {
                ZMode::Formal => json!({ "pair": [i, j], "z_poly": p.render_coeffs(name) }),
                ZMode::Value(v) => json!({ "pair": [i, j], "value": p.eval(v).render(name) }),
            };
            cells.push(cell);
        }
    }
    doc(kind, json!({ "z": z.label(), "entries": cells }))
}

pub fn z_table_text(table: &[Vec<ZPoly>], z: &ZMode, sym: &dyn Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, row) in table.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let body = match z {
                ZMode::Formal => p.render(sym),
                ZMode::Value(v) => p.eval(v).render(sym),
            };
            out.push_str(&format!("{{{}, {}}} = {}\n", sym(i), sym(j), body));
        }
    }
    out
}

/// `lambda_coeffs[k][m]` is the coefficient of `λ^k z^m`.
fn lambda_coeffs(p: &LambdaPoly) -> Vec<Vec<String>> {
    let lmax = p.lambda_degree().map_or(0, |d| d + 1);
    let zmax = p.z_degree().map_or(0, |d| d + 1);
    (0..lmax).map(|l| (0..zmax).map(|k| p.coeff(l, k).render(w_name)).collect()).collect()
}

pub fn lambda_table_json(table: &GenTable, z: &ZMode, route: &str) -> Value {
    let table = match z {
        ZMode::Formal => table.clone(),
        ZMode::Value(v) => table.eval_z(v),
    };
    let n = table.len();
    let mut cells = Vec::new();
    for i in 0..n {
        for j in 0..n {
            cells.push(json!({ "pair": [i, j], "lambda_coeffs": lambda_coeffs(table.get(i, j)) }));
        }
    }
    doc("lambda-bracket", json!({ "route": route, "z": z.label(), "entries": cells }))
}

pub fn lambda_table_text(table: &GenTable, z: &ZMode) -> String {
    let mut out = String::new();
    for i in 0..table.len() {
        for j in 0..table.len() {
            let p = match z {
                ZMode::Formal => table.get(i, j).clone(),
                ZMode::Value(v) => table.get(i, j).eval_z(v),
            };
            out.push_str(&format!("{{{} λ {}}} = {}\n", w_name(i), w_name(j), p.render(w_name)));
        }
    }
    out
}

pub fn generators_json(wa: &WAlgebra) -> Value {
    let setup = wa.setup();
    let name = |k: usize| setup.var_name(k);
    let gens: Vec<Value> = wa
        .generators()
        .iter()
        .map(|g| {
            json!({
                "j": g.j,
                "name": w_name(g.j),
                "weight": half(g.weight2),
                "w": g.w.render(name),
                "linear_term": g.linear_term.render(name),
            })
        })
        .collect();
    doc("generators", json!({ "generators": gens }))
}

pub fn generators_text(wa: &WAlgebra) -> String {
    let setup = wa.setup();
    let name = |k: usize| setup.var_name(k);
    let mut out = String::new();
    for g in wa.generators() {
        out.push_str(&format!(
            "{} (weight {}) = {}\n    linear term: {}\n",
            w_name(g.j),
            half(g.weight2),
            g.w.render(name),
            g.linear_term.render(name)
        ));
    }
    out
}

/// `μ(w_j)` for all generators and `μ(extra)` for named elements.
pub fn miura_images(wa: &WAlgebra, extra: &[(String, DiffPoly)]) -> Vec<(String, TensorElem)> {
    let mut out: Vec<(String, TensorElem)> =
        (0..wa.setup().jf_len()).map(|j| (w_name(j), miura(wa, &DiffPoly::var(j)))).collect();
    for (n, p) in extra {
        out.push((n.clone(), miura(wa, p)));
    }
    out
}

pub fn miura_json(setup: &GradedSetup, images: &[(String, TensorElem)], report: &Report) -> Value {
    let name = |k: usize| setup.var_name(k);
    let imgs: Vec<Value> = images.iter().map(|(n, p)| json!({ "element": n, "image": p.render(name) })).collect();
    doc("miura", json!({ "images": imgs, "report": report_body(report) }))
}

pub fn miura_text(setup: &GradedSetup, images: &[(String, TensorElem)]) -> String {
    let name = |k: usize| setup.var_name(k);
    images.iter().map(|(n, p)| format!("mu({n}) = {}\n", p.render(name))).collect()
}

fn report_body(report: &Report) -> Value {
    json!({ "all_passed": report.all_passed(), "checks": serde_json::to_value(&report.checks).expect("serializable") })
}

pub fn report_json(kind: &str, report: &Report) -> Value {
    doc(kind, json!({ "report": report_body(report) }))
}

/// Attaches a report to an existing document.
pub fn with_report(mut v: Value, report: &Report) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("report".into(), report_body(report));
    }
    v
}

/// Machine-readable error record.
pub fn error_json(err: &crate::Error) -> Value {
    let mut v = json!({ "schema": SCHEMA, "kind": "error", "error": err.kind(), "message": err.to_string() });
    if let crate::Error::Parse { field, .. } = err {
        v["field"] = Value::String(field.clone());
    }
    v
}

/// Pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::finite_table;
    use crate::lie::{build_sl, sl2_triple_from_partition};
    use crate::setup::graded_setup;
    use crate::walg::Route;

    fn walg(n: usize, part: &[usize]) -> WAlgebra {
        let alg = build_sl(n).unwrap();
        let t = sl2_triple_from_partition(&alg, part).unwrap();
        WAlgebra::new(graded_setup(alg, t, None).unwrap()).unwrap()
    }

    #[test]
    fn sl2_lambda_table_shape() {
        let wa = walg(2, &[2]);
        let v = lambda_table_json(&wa.table(Route::Closed), &ZMode::Formal, "closed");
        assert_eq!(v["schema"], SCHEMA);
        let e = &v["entries"][0];
        assert_eq!(e["pair"], json!([0, 0]));
        assert_eq!(e["lambda_coeffs"][3][0], "-1/2");
        assert_eq!(e["lambda_coeffs"][0][0], "w1'");
    }

    #[test]
    fn kostant_table_is_zero() {
        let wa = walg(3, &[3]);
        let v = z_table_json("finite-bracket", &finite_table(wa.setup()), &ZMode::Formal, &gf_name);
        for e in v["entries"].as_array().unwrap() {
            assert_eq!(e["z_poly"], json!([]));
        }
    }

    #[test]
    fn output_is_deterministic() {
        let a = to_string(&setup_json(walg(3, &[2, 1]).setup()));
        let b = to_string(&setup_json(walg(3, &[2, 1]).setup()));
        assert_eq!(a, b);
    }

    #[test]
    fn error_record_names_field() {
        let e = crate::Error::Parse { field: "n".into(), message: "missing".into() };
        let v = error_json(&e);
        assert_eq!(v["field"], "n");
        assert_eq!(v["error"], "parse-error");
    }
}
