use std::fs;
use std::path::Path;

use serde::Serialize;

use algebroid_forge::algebroid::{
    analyze_sl2_triple, check_tca, check_vertex_algebroid, construct_blambda, AlgebroidDocument, AxiomReport,
    CriterionReport, Sl2EmbeddingReport, VertexAlgebroid,
};
use algebroid_forge::conformal::{check_conformal, ConformalData, ConformalReport};
use algebroid_forge::leibniz::{verify_leibniz, Verdict};
use algebroid_forge::liealg::{chevalley_basis, coroot_element, CartanType};
use algebroid_forge::linalg::{scaled, unit_svec, Subspace};
use algebroid_forge::va::{
    borcherds_check, c2_report, BorcherdsReport, C2Report, LowDegreeReport, SaturationConfig, SaturationStats,
    SquareZeroReport, VertexAlgebra,
};
use algebroid_forge::ExactScalar;

use crate::output::{emit, mark, CliError, Context, RunEcho, Status, Summary};
use crate::{BundleArgs, Quotient, Suite, VaArgs};

/// Most criterion witnesses kept in a constructed document.
const WITNESS_LIMIT: usize = 64;

fn cartan_type(args: &BundleArgs) -> Result<CartanType, CliError> {
    let label = args.cartan_type.as_deref().ok_or_else(|| CliError::Usage("give a bundle file or --type".into()))?;
    let has_digits = label.chars().any(|c| c.is_ascii_digit());
    match (has_digits, args.rank) {
        (true, None) => Ok(label.parse()?),
        (false, Some(r)) => Ok(CartanType::new(label, r)?),
        (true, Some(_)) => Err(CliError::Usage(format!("--type {label} already fixes the rank"))),
        (false, None) => Err(CliError::Usage(format!("--type {label} needs --rank"))),
    }
}

fn parse_lambda(text: &str, t: CartanType) -> Result<Vec<i64>, CliError> {
    if text.trim().eq_ignore_ascii_case("theta") {
        let (_, rd, _) = chevalley_basis(t)?;
        return Ok(rd.theta_weight());
    }
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad --lambda entry {s:?}"))))
        .collect()
}

fn read_document(path: &Path) -> Result<AlgebroidDocument, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn load(ctx: &Context, args: &BundleArgs) -> Result<(VertexAlgebroid, RunEcho), CliError> {
    let mut echo = RunEcho { seed: ctx.seed, ..Default::default() };
    if let Some(path) = &args.input {
        echo.input = Some(path.display().to_string());
        return Ok((read_document(path)?.bundle, echo));
    }
    let t = cartan_type(args)?;
    let lambda = parse_lambda(&args.lambda, t)?;
    let bundle = construct_blambda(t, &lambda)?;
    echo.cartan_type = Some(t.to_string());
    echo.lambda = Some(lambda);
    Ok((bundle, echo))
}

fn saturation(va: &VaArgs) -> SaturationConfig {
    SaturationConfig {
        max_degree: va.degree,
        word_cap: va.word_cap,
        max_rounds: va.max_rounds,
        schedule: va.schedule.into(),
        order: va.order.into(),
    }
}

fn threads() -> Result<usize, CliError> {
    match std::env::var("ALGEBROID_FORGE_THREADS") {
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("ALGEBROID_FORGE_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

fn failing_lines(rep: &AxiomReport) -> Vec<String> {
    rep.failing()
        .map(|c| format!("{} / {}: {} of {} fail, witness {:?}", c.family, c.identity, c.violations, c.checked, c.witness))
        .collect()
}

#[derive(Serialize)]
struct ConstructOutput<'a> {
    #[serde(flatten)]
    document: &'a AlgebroidDocument,
    config: &'a RunEcho,
}

pub fn construct(ctx: &Context, args: &BundleArgs) -> Result<Status, CliError> {
    if args.input.is_some() {
        return Err(CliError::Usage("construct takes --type and --lambda, not a file".into()));
    }
    let (bundle, echo) = load(ctx, args)?;
    let criterion = bundle.criterion(Some(WITNESS_LIMIT));
    let doc = AlgebroidDocument::new(bundle, criterion);
    let body = match ctx.format {
        crate::Format::Json => {
            serde_json::to_string_pretty(&ConstructOutput { document: &doc, config: &echo }).expect("serializable") + "\n"
        }
        crate::Format::Text => {
            let mut lines = vec![
                format!("construct (seed {})", echo.seed),
                format!("  dims (A, B) = ({}, {})", doc.dims.0, doc.dims.1),
                format!("  valid: {}", doc.valid),
            ];
            if let Some(w) = &doc.weight_conditions {
                lines.push(format!(
                    "  λ(h_θ) = {}, λ(h_α) = 1 for every positive α: {}",
                    w.on_theta, w.one_on_every_positive_coroot
                ));
            }
            if let Some(w) = doc.criterion.as_ref().and_then(|c| c.violations.first()) {
                lines.push(format!("  witness ({}, {}, {}) residual {}", w.g, w.g_prime, w.a, w.residual));
            }
            lines.join("\n") + "\n"
        }
    };
    crate::output::write_out(ctx, &body)?;
    Ok(if doc.valid { Status::Pass } else { Status::Invalid })
}

#[derive(Serialize)]
struct LeibnizSuite {
    dim: usize,
    leibniz_identity_holds: bool,
    leib_dim: usize,
    leib_equals_image_d: bool,
    leib_is_two_sided: bool,
    leib_is_abelian: bool,
    radical_dim: usize,
    verdict: Verdict,
    verdict_reason: String,
    /// Levi check of the embedded Lie algebra, when there is one.
    levi: Option<bool>,
}

impl LeibnizSuite {
    fn new(bundle: &VertexAlgebroid) -> Self {
        let l = bundle.leibniz();
        let leib = l.leib_ideal();
        let verdict = l.simplicity_verdict();
        let levi = bundle.lie.as_ref().and_then(|lie| {
            let g = Subspace::from_vectors(bundle.b_dim(), lie.g_in_b.iter().map(|&i| unit_svec(i)).collect::<Vec<_>>());
            l.levi_check(&g).ok().map(|r| r.holds())
        });
        LeibnizSuite {
            dim: l.dim(),
            leibniz_identity_holds: verify_leibniz(&l.algebra).holds(),
            leib_dim: leib.dim(),
            leib_equals_image_d: leib == bundle.image_d(),
            leib_is_two_sided: l.is_two_sided_ideal(&leib),
            leib_is_abelian: l.bracket_span(&leib, &leib).is_zero(),
            radical_dim: verdict.radical_dim,
            verdict: verdict.verdict,
            verdict_reason: verdict.reason,
            levi,
        }
    }

    fn passes(&self) -> bool {
        self.leibniz_identity_holds && self.leib_is_two_sided && self.leib_is_abelian && self.levi != Some(false)
    }
}

impl Summary for LeibnizSuite {
    fn summary(&self) -> Vec<String> {
        vec![
            format!("Leibniz identity: {}", mark(self.leibniz_identity_holds)),
            format!("dim Leib = {} (equals ∂A: {})", self.leib_dim, self.leib_equals_image_d),
            format!("Leib two-sided: {}, [Leib, Leib] = 0: {}", self.leib_is_two_sided, self.leib_is_abelian),
            format!("radical dim {}, verdict {:?}", self.radical_dim, self.verdict),
            format!("Levi complement: {}", self.levi.map_or("n/a".into(), |b| b.to_string())),
        ]
    }
}

#[derive(Serialize, Default)]
struct CheckReport {
    passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formulations_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    criterion: Option<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tca: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leibniz: Option<LeibnizSuite>,
}

impl Summary for CheckReport {
    fn summary(&self) -> Vec<String> {
        let mut out = vec![format!("overall: {}", mark(self.passes))];
        for (name, rep) in [("axioms", &self.axioms), ("conditions", &self.conditions), ("tca", &self.tca)] {
            if let Some(r) = rep {
                out.push(format!("{name}: {} ({} identities)", mark(r.passes()), r.checks.len()));
                out.extend(failing_lines(r).into_iter().map(|l| format!("  {l}")));
            }
        }
        if let Some(c) = &self.criterion {
            out.push(format!("criterion: {} ({} violations)", mark(c.passes()), c.violation_count));
        }
        if let Some(l) = &self.leibniz {
            out.extend(l.summary());
        }
        out
    }
}

pub fn check(ctx: &Context, input: &Path, suite: Suite) -> Result<Status, CliError> {
    let bundle = read_document(input)?.bundle;
    let echo = RunEcho { seed: ctx.seed, input: Some(input.display().to_string()), ..Default::default() };
    let mut rep = CheckReport { passes: true, ..Default::default() };
    if matches!(suite, Suite::Algebroid | Suite::All) {
        let r = check_vertex_algebroid(&bundle);
        let criterion = bundle.criterion(Some(WITNESS_LIMIT));
        rep.passes &= r.passes() && r.formulations_agree && criterion.as_ref().is_none_or(|c| c.passes());
        rep.axioms = Some(r.axioms);
        rep.conditions = Some(r.conditions);
        rep.formulations_agree = Some(r.formulations_agree);
        rep.criterion = criterion;
    }
    if matches!(suite, Suite::Tca | Suite::All) {
        let r = check_tca(&bundle.to_tca());
        rep.passes &= r.passes();
        rep.tca = Some(r);
    }
    if matches!(suite, Suite::Leibniz | Suite::All) {
        let l = LeibnizSuite::new(&bundle);
        rep.passes &= l.passes();
        rep.leibniz = Some(l);
    }
    emit(ctx, "check", &echo, &rep)?;
    Ok(Status::from_pass(rep.passes))
}

impl Summary for Sl2EmbeddingReport {
    fn summary(&self) -> Vec<String> {
        let mut out = vec![
            format!("B is a Lie algebra: {}", self.b_is_lie),
            format!("Ker∂ is the unit line: {}", self.ker_d_is_unit_line),
            format!("summand highest weights {:?}", self.components),
            format!("<e, f> = {}", self.level.as_ref().map_or("not a multiple of 1̂".into(), |l| l.to_string())),
        ];
        out.extend(self.table.iter().map(|l| format!("{} {}", mark(l.holds), l.line)));
        out
    }
}

pub fn analyze_sl2(ctx: &Context, args: &BundleArgs) -> Result<Status, CliError> {
    let (bundle, echo) = load(ctx, args)?;
    let [e, f, h] = bundle.theta_triple().ok_or_else(|| CliError::Usage("the bundle carries no root data".into()))?;
    let rep = analyze_sl2_triple(&bundle, &e, &f, &h)?;
    emit(ctx, "analyze-sl2", &echo, &rep)?;
    Ok(Status::from_pass(rep.table_holds() && rep.ker_d_is_unit_line))
}

pub fn analyze_leibniz(ctx: &Context, args: &BundleArgs) -> Result<Status, CliError> {
    let (bundle, echo) = load(ctx, args)?;
    let rep = LeibnizSuite::new(&bundle);
    emit(ctx, "analyze-leibniz", &echo, &rep)?;
    Ok(Status::from_pass(rep.passes()))
}

#[derive(Serialize)]
struct QuotientReport {
    dims: Vec<usize>,
    stats: SaturationStats,
    /// The ideal meets degrees 0 and 1 trivially.
    ideal_misses_a: bool,
    ideal_misses_b: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_square_vanishes: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    square_zero: Option<SquareZeroReport>,
}

#[derive(Serialize)]
struct BuildReport {
    enveloping: LowDegreeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<QuotientReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    borcherds: Option<BorcherdsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c2: Option<C2Report>,
}

impl BuildReport {
    fn passes(&self) -> bool {
        let q = self.quotient.as_ref().is_none_or(|q| {
            q.ideal_misses_a
                && q.ideal_misses_b
                && q.theta_square_vanishes != Some(false)
                && q.square_zero.as_ref().is_none_or(SquareZeroReport::passes)
        });
        self.enveloping.passes()
            && q
            && self.borcherds.as_ref().is_none_or(BorcherdsReport::passes)
            && self.c2.as_ref().is_none_or(C2Report::passes)
    }
}

fn stats_line(name: &str, dims: &[usize], stats: &SaturationStats) -> String {
    let end = if stats.stabilized { "stabilized" } else { "budget reached" };
    format!("{name} dims {dims:?} ({} rounds, {end}, {} truncated)", stats.rounds, stats.truncated)
}

impl Summary for BuildReport {
    fn summary(&self) -> Vec<String> {
        let e = &self.enveloping;
        let mut out = vec![stats_line("V_B", &e.dims, &e.stats)];
        out.push(format!("degree 0 = A and degree 1 = B with products: {}", mark(e.passes())));
        if let Some(q) = &self.quotient {
            out.push(stats_line("quotient", &q.dims, &q.stats));
            out.push(format!("ideal meets A: {}, meets B: {}", !q.ideal_misses_a, !q.ideal_misses_b));
            if let Some(t) = q.theta_square_vanishes {
                out.push(format!("e_θ(-1)e_θ ≡ 0: {t}"));
            }
            if let Some(s) = &q.square_zero {
                out.push(format!("Y(e_θ, z)^2 = 0 through the computed degrees: {}", mark(s.passes())));
            }
        }
        if let Some(b) = &self.borcherds {
            out.extend(borcherds_lines(b));
        }
        if let Some(c) = &self.c2 {
            out.push(format!("C2 quotient dims {:?}, complement covered: {}", c.quotient_dims, c.covered_by_classes));
        }
        out
    }
}

fn borcherds_lines(b: &BorcherdsReport) -> Vec<String> {
    [("commutator", &b.commutator), ("iterate", &b.iterate), ("skew-symmetry", &b.skew_symmetry), ("[D, v_n]", &b.translation)]
        .iter()
        .map(|(n, s)| format!("{n}: {} violations in {} samples ({} nonzero)", s.violations, s.tested, s.nonzero))
        .collect()
}

fn build_quotient(bundle: &VertexAlgebroid, cfg: SaturationConfig, quotient: Quotient) -> Result<VertexAlgebra, CliError> {
    Ok(match quotient {
        Quotient::None => VertexAlgebra::enveloping(bundle, cfg)?,
        Quotient::Etheta => VertexAlgebra::simple(bundle, cfg)?,
    })
}

pub fn build_va(ctx: &Context, args: &BundleArgs, va: &VaArgs, quotient: Quotient, samples: usize) -> Result<Status, CliError> {
    let (bundle, mut echo) = load(ctx, args)?;
    let cfg = saturation(va);
    echo.max_degree = Some(cfg.max_degree);
    echo.word_cap = Some(cfg.word_cap);
    echo.samples = Some(samples);
    // the quotient needs e_θ(-1)e_θ, which has degree 2
    let with_quotient = quotient == Quotient::Etheta && cfg.max_degree >= 2;
    let (enveloping, simple) = if threads()? > 1 && with_quotient {
        std::thread::scope(|s| {
            let q = s.spawn(|| VertexAlgebra::simple(&bundle, cfg));
            let e = VertexAlgebra::enveloping(&bundle, cfg);
            (e, Some(q.join().expect("quotient build panicked")))
        })
    } else {
        let e = VertexAlgebra::enveloping(&bundle, cfg);
        (e, with_quotient.then(|| VertexAlgebra::simple(&bundle, cfg)))
    };
    let mut enveloping = enveloping?;
    let mut simple = simple.transpose()?;
    let low = enveloping.low_degree_report()?;
    let quotient_report = match simple.as_mut() {
        Some(q) => {
            let sq = q.theta_square()?;
            let dims = q.space.dims();
            Some(QuotientReport {
                ideal_misses_a: dims[0] == bundle.a_dim(),
                ideal_misses_b: dims[1] == bundle.b_dim(),
                dims,
                stats: q.space.stats.clone(),
                theta_square_vanishes: Some(q.space.is_zero(&sq)?),
                square_zero: Some(q.theta_square_zero()?),
            })
        }
        None => None,
    };
    let target = simple.as_mut().unwrap_or(&mut enveloping);
    let borcherds = if cfg.max_degree >= 1 && samples > 0 { Some(borcherds_check(target, samples, ctx.seed)?) } else { None };
    let c2 = if with_quotient { Some(c2_report(target)?) } else { None };
    let rep = BuildReport { enveloping: low, quotient: quotient_report, borcherds, c2 };
    emit(ctx, "build-va", &echo, &rep)?;
    Ok(Status::from_pass(rep.passes()))
}

#[derive(Serialize)]
struct ConformalOutput {
    h_theta_coefficient: ExactScalar,
    shift: Vec<String>,
    conformal: bool,
    report: ConformalReport,
}

impl Summary for ConformalOutput {
    fn summary(&self) -> Vec<String> {
        let r = &self.report;
        let show = |x: &Option<ExactScalar>| x.as_ref().map_or("none".into(), |v| v.to_string());
        let mut out = vec![
            format!("c = {}, <h, h> = {}", show(&r.sugawara_central_charge), r.h_norm),
            format!("rank expected {}, measured {}", show(&r.expected_rank), show(&r.measured_rank)),
            format!("hypotheses: {} (shift {:?})", mark(r.hypotheses.holds()), r.shift_mode),
            format!("Virasoro: {} violations in {} tests", r.virasoro.violations, r.virasoro.tested),
            format!("L~(-1) = D: {}, mode formula: {}", mark(r.translation.passes()), mark(r.mode_formula.passes())),
            format!("L~(0) diagonalizable: {}", r.l0_diagonalizable),
        ];
        out.extend(r.modes_on_vector.iter().map(|m| format!("{} L~({})ω~ = {} (want {})", mark(m.holds), m.n, m.value, m.expected)));
        out.push(format!("conformal: {}", self.conformal));
        out
    }
}

pub fn conformal(ctx: &Context, args: &BundleArgs, va: &VaArgs, h_theta: &str, shift: &[String]) -> Result<Status, CliError> {
    let (bundle, mut echo) = load(ctx, args)?;
    let cfg = saturation(va);
    echo.max_degree = Some(cfg.max_degree);
    echo.word_cap = Some(cfg.word_cap);
    let mu: ExactScalar = h_theta.parse().map_err(|_| CliError::Usage(format!("bad --h-theta {h_theta:?}")))?;
    let rd = bundle
        .lie
        .as_ref()
        .and_then(|l| l.root_data.as_ref())
        .ok_or_else(|| CliError::Usage("the bundle carries no root data".into()))?;
    let h = scaled(&coroot_element(rd, rd.theta), &mu);
    let a_list = shift
        .iter()
        .map(|name| {
            bundle
                .a_names
                .iter()
                .position(|n| n == name)
                .map(unit_svec)
                .ok_or_else(|| CliError::Usage(format!("{name} is not a basis element of A")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut target = VertexAlgebra::simple(&bundle, cfg)?;
    let report = check_conformal(&mut target, &ConformalData { h, a_list })?;
    let out = ConformalOutput {
        h_theta_coefficient: mu,
        shift: shift.to_vec(),
        conformal: report.is_conformal() && report.hypotheses.holds(),
        report,
    };
    emit(ctx, "conformal", &echo, &out)?;
    Ok(Status::from_pass(out.conformal))
}

impl Summary for BorcherdsReport {
    fn summary(&self) -> Vec<String> {
        let mut out = borcherds_lines(self);
        out.push(format!("all identities: {}", mark(self.passes())));
        out
    }
}

pub fn borcherds(ctx: &Context, args: &BundleArgs, va: &VaArgs, quotient: Quotient, samples: usize) -> Result<Status, CliError> {
    let (bundle, mut echo) = load(ctx, args)?;
    let cfg = saturation(va);
    echo.max_degree = Some(cfg.max_degree);
    echo.word_cap = Some(cfg.word_cap);
    echo.samples = Some(samples);
    let mut target = build_quotient(&bundle, cfg, quotient)?;
    let rep = borcherds_check(&mut target, samples, ctx.seed)?;
    emit(ctx, "borcherds", &echo, &rep)?;
    Ok(Status::from_pass(rep.passes()))
}
