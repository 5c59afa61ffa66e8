use ct_forge_core::ct::{ct_all_factored, ct_var_series};
use ct_forge_core::laurent::expand_graded;
use ct_forge_core::{ct_all_series, ct_var_factored, FactoredForm, Grading, LaurentPoly, QRat};

use crate::args::{CtArgs, CtMethod};
use crate::expr::{parse_and_lower, parse_var, Value};
use crate::{CliError, CliResult};

/// The input as a sum of forms: one form, or one monomial per term.
fn summands(v: &Value) -> Vec<FactoredForm> {
    match v.to_form() {
        Some(f) => vec![f],
        None => match v {
            Value::Poly(p) => p
                .terms()
                .map(|(m, c)| FactoredForm::monomial_form(c.clone(), m.clone()))
                .collect(),
            Value::Form(f) => vec![f.clone()],
        },
    }
}

fn join(forms: &[FactoredForm]) -> String {
    if forms.is_empty() {
        return "0".into();
    }
    forms
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(" + ")
}

fn all_vars(value: &Value, method: CtMethod) -> CliResult {
    let brute = || -> CliResult<QRat> {
        match value.to_poly() {
            Some(p) => Ok(p.constant_term()),
            None => Ok(ct_all_series(
                &value.to_form().expect("non-polynomial values are forms"),
            )?),
        }
    };
    let pfrac = || -> CliResult<QRat> {
        summands(value)
            .iter()
            .map(|f| ct_all_factored(f).map_err(CliError::from))
            .sum()
    };
    match method {
        CtMethod::Brute => println!("{}", brute()?),
        CtMethod::Pfrac => println!("{}", pfrac()?),
        CtMethod::Both => {
            let (b, p) = (brute()?, pfrac()?);
            println!("brute = {b}");
            println!("pfrac = {p}");
            if b != p {
                return Err(CliError::Failure("the two methods disagree".into()));
            }
        }
    }
    Ok(())
}

fn one_var(value: &Value, v: usize, method: CtMethod, truncation: i64) -> CliResult {
    let pf = || -> CliResult<Vec<FactoredForm>> {
        let mut out = Vec::new();
        for f in summands(value) {
            out.extend(ct_var_factored(&f, v)?);
        }
        Ok(out)
    };
    // exact when the input has no denominators
    if let Some(p) = value.to_poly() {
        let exact = p.ct_var(v);
        match method {
            CtMethod::Brute => println!("{exact}"),
            CtMethod::Pfrac => println!("{}", join(&pf()?)),
            CtMethod::Both => {
                let parts = pf()?;
                let mut sum = LaurentPoly::zero();
                for f in &parts {
                    sum = &sum + &f.expand_exact()?;
                }
                println!("brute = {exact}");
                println!("pfrac = {}", join(&parts));
                if sum != exact {
                    return Err(CliError::Failure("the two methods disagree".into()));
                }
            }
        }
        return Ok(());
    }

    let form = value.to_form().expect("non-polynomial values are forms");
    let note = |g: &Grading| {
        eprintln!(
            "note: series kept through weight {truncation} with weights {:?} on x0, x1, ...",
            g.weights()
        );
    };
    match method {
        CtMethod::Brute => {
            let g = Grading::for_forms([&form])?;
            println!("{}", ct_var_series(&form, v, &g, truncation)?);
            note(&g);
        }
        CtMethod::Pfrac => println!("{}", join(&pf()?)),
        CtMethod::Both => {
            let parts = pf()?;
            let g = Grading::for_forms(std::iter::once(&form).chain(parts.iter()))?;
            let series = ct_var_series(&form, v, &g, truncation)?;
            let mut sum = LaurentPoly::zero();
            for f in &parts {
                sum = &sum + &expand_graded(f, &g, truncation)?;
            }
            println!("brute = {series}");
            println!("pfrac = {}", join(&parts));
            note(&g);
            if sum != series {
                return Err(CliError::Failure(format!(
                    "the two methods disagree through weight {truncation}"
                )));
            }
        }
    }
    Ok(())
}

pub fn run(args: &CtArgs) -> CliResult {
    if args.var_order.is_some() {
        return Err(CliError::Usage(
            "--var-order is not supported: series are always taken in x0 first, then x1, ..."
                .into(),
        ));
    }
    if args.truncation < 0 {
        return Err(CliError::Usage("--truncation must be nonnegative".into()));
    }
    let value = parse_and_lower(&args.expr).map_err(CliError::Usage)?;
    match &args.var {
        Some(name) => {
            let v = parse_var(name.trim())
                .ok_or_else(|| CliError::Usage(format!("`{name}` is not a variable like x0")))?;
            one_var(&value, v, args.method, args.truncation)
        }
        None => all_vars(&value, args.method),
    }
}
