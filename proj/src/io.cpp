#include <fstream>
#include <limits>
#include <sstream>

#include "wideopen/io.hpp"

namespace wideopen {

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

const Json& need(const Json& j, const std::string& field) {
    if (!j.is_object() || !j.contains(field)) schema("missing field '" + field + "'");
    return j.at(field);
}

long json_long(const Json& j, const std::string& field) {
    const Json& v = need(j, field);
    if (!v.is_number_integer()) schema("field '" + field + "' must be an integer");
    return v.get<long>();
}

std::string json_string(const Json& j, const std::string& field) {
    const Json& v = need(j, field);
    if (!v.is_string()) schema("field '" + field + "' must be a string");
    return v.get<std::string>();
}

Rational rational_value(const Json& v, const std::string& field) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (!v.is_string()) schema("field '" + field + "' must be a rational string");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (field '" + field + "')");
    }
}

std::string str(const Rational& r) { return to_string(r); }

} // namespace

Rational json_rational(const Json& j, const std::string& field) { return rational_value(need(j, field), field); }

Point json_point(const Json& j, const std::string& field) {
    const Json& v = need(j, field);
    if (v.is_string() && v.get<std::string>() == "inf") return Point::infinity();
    return Point::finite(rational_value(v, field));
}

LaurentChunk json_chunk(const Json& j, long p) {
    if (!j.is_array()) schema("series must be a list of terms");
    LaurentChunk::Map m;
    std::optional<TailBound> tail;
    for (auto& t : j) {
        if (t.contains("tail")) {
            const Json& tj = t.at("tail");
            TailBound tb;
            tb.p = p;
            if (tj.contains("below")) {
                tb.side = TailSide::Lower;
                tb.edge = json_long(tj, "below");
            } else {
                tb.side = TailSide::Upper;
                tb.edge = json_long(tj, "above");
            }
            tb.q0 = json_rational(tj, "q0");
            tb.bound = NormExp(json_rational(tj, "bound_exp"));
            tail = tb;
            continue;
        }
        long e = json_long(t, "exp");
        Rational c = json_rational(t, "coef");
        if (m.count(e)) schema("exponent " + std::to_string(e) + " repeated");
        if (c != 0) m[e] = c;
    }
    return LaurentChunk(std::move(m), tail);
}

RationalFn json_function(const Json& j) {
    RationalFn f;
    if (j.contains("entire"))
        for (auto& t : j.at("entire")) f.add_entire(json_long(t, "exp"), json_rational(t, "coef"));
    if (j.contains("poles"))
        for (auto& t : j.at("poles")) {
            long k = json_long(t, "order");
            if (k < 1) schema("pole order must be positive");
            f.add_pole(json_rational(t, "at"), k, json_rational(t, "coef"));
        }
    return f;
}

WideOpenDomain json_domain(const Json& j) {
    PContext ctx(json_long(j, "p"));
    std::vector<Disc> discs;
    for (auto& d : need(j, "discs")) discs.push_back({json_point(d, "center"), json_rational(d, "radius_exp")});
    return WideOpenDomain(ctx, discs);
}

Json to_json(const NormExp& e) { return e.str(); }

Json to_json(const LaurentChunk& c) {
    Json a = Json::array();
    for (auto& [e, v] : c.coeffs()) a.push_back({{"exp", e}, {"coef", str(v)}});
    if (auto& t = c.tail()) {
        Json tj;
        tj[t->side == TailSide::Lower ? "below" : "above"] = t->edge;
        tj["q0"] = str(t->q0);
        tj["bound_exp"] = t->bound.str();
        a.push_back({{"tail", tj}});
    }
    return a;
}

Json to_json(const RationalFn& f) {
    Json j;
    j["text"] = f.str();
    Json en = Json::array();
    for (auto& [m, v] : f.entire()) en.push_back({{"exp", m}, {"coef", str(v)}});
    Json po = Json::array();
    for (auto& [a, part] : f.poles())
        for (auto& [k, v] : part) po.push_back({{"at", str(a)}, {"order", k}, {"coef", str(v)}});
    j["entire"] = en;
    j["poles"] = po;
    return j;
}

namespace {

Mode parse_mode(const std::string& s) {
    if (s == "functions") return Mode::Functions;
    if (s == "differentials") return Mode::Differentials;
    schema("mode must be functions or differentials");
}

DiffMode parse_diff_mode(const std::string& s) {
    if (s == "principal") return DiffMode::Principal;
    if (s == "generalized") return DiffMode::Generalized;
    schema("diff_mode must be principal or generalized");
}

Semantics parse_semantics(const std::string& s) {
    if (s == "jet") return Semantics::Jet;
    if (s == "exact") return Semantics::Exact;
    schema("semantics must be jet or exact");
}

const char* mode_name(Mode m) { return m == Mode::Functions ? "functions" : "differentials"; }

} // namespace

ProblemFile parse_problem(const Json& j) {
    WideOpenDomain dom = json_domain(j);
    ProblemFile pf{MLProblem{dom, Mode::Functions, Semantics::Jet, DiffMode::Principal, {}}, 12};
    MLProblem& pb = pf.problem;
    if (j.contains("mode")) pb.mode = parse_mode(json_string(j, "mode"));
    if (j.contains("diff_mode")) pb.diff_mode = parse_diff_mode(json_string(j, "diff_mode"));
    if (j.contains("semantics")) pb.semantics = parse_semantics(json_string(j, "semantics"));
    if (j.contains("depth")) pf.depth = json_long(j, "depth");
    const long p = dom.ctx().p();
    std::vector<std::optional<BoundaryDatum>> ends(dom.num_ends());
    for (auto& e : need(j, "ends")) {
        long i = json_long(e, "end");
        if (i < 0 || static_cast<std::size_t>(i) >= dom.num_ends()) schema("end " + std::to_string(i) + " does not exist");
        if (ends[i]) schema("end " + std::to_string(i) + " listed twice");
        const Rational& r = dom.disc(i).radius_q;
        auto sep = dom.separation(i);
        Rational qo = e.contains("q_outer") ? json_rational(e, "q_outer") : sep ? Rational((r + *sep) / 2) : Rational(r + 1);
        BoundaryDatum b;
        b.annulus = boundary_annulus(dom, i, qo);
        b.top = json_long(e, "top");
        b.free = e.contains("free") && e.at("free").get<bool>();
        b.trim = e.contains("trim") ? json_rational(e, "trim") : Rational((r + qo) / 2);
        if (!(r < b.trim && b.trim < qo)) throw Error(ErrorCode::RadiusOutOfRange, "trim outside the boundary annulus at end " + std::to_string(i));
        if (e.contains("data")) b.data = json_chunk(e.at("data"), p);
        ends[i] = b;
    }
    for (std::size_t i = 0; i < ends.size(); ++i) {
        if (!ends[i]) schema("end " + std::to_string(i) + " missing");
        pb.ends.push_back(*ends[i]);
    }
    pb.validate();
    return pf;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        schema(path + ": " + e.what());
    }
}

ProblemFile load_problem(const std::string& path) { return parse_problem(load_json(path)); }

int exit_code_for(Verdict v) {
    switch (v) {
    case Verdict::Solvable: return 0;
    case Verdict::Unsolvable: return 2;
    case Verdict::Inconclusive: return 3;
    }
    return 1;
}

namespace {

Json oracle_json(const OracleReport& o) {
    Json j;
    j["verdict"] = verdict_name(o.verdict);
    j["semantics"] = o.semantics == Semantics::Jet ? "jet" : "exact";
    j["unknowns"] = o.unknowns;
    j["equations"] = o.equations;
    j["solution"] = o.solution ? to_json(*o.solution) : Json(nullptr);
    Json w = Json::array();
    for (auto& r : o.witness) {
        Json row;
        if (r.end == std::numeric_limits<std::size_t>::max())
            row["row"] = "residue at infinity";
        else {
            row["end"] = r.end;
            row["exp"] = r.u;
        }
        row["multiplier"] = str(r.multiplier);
        w.push_back(row);
    }
    j["witness"] = w;
    if (!o.reason.empty()) j["reason"] = o.reason;
    return j;
}

Json jets_json(const MLProblem& pb, const RationalFn& f) {
    Json a = Json::array();
    for (std::size_t i = 0; i < pb.ends.size(); ++i) {
        const BoundaryDatum& b = pb.ends[i];
        long lo = b.top;
        if (auto mn = b.data.min_exp()) lo = std::min(lo, *mn);
        if (b.data.tail()) lo = std::min(lo, b.data.tail()->edge);
        LocalForm lf = split_at(f, b.annulus.end.center);
        if (!lf.principal.empty()) lo = std::min(lo, lf.principal.begin()->first - 2);
        const Point& x = b.annulus.end.center;
        Window w{lo, b.top};
        LaurentChunk ex = pb.mode == Mode::Functions ? local_expansion(f, x, w) : local_expansion(RationalDiff{f}, x, w);
        a.push_back({{"end", i}, {"window", {lo, b.top}}, {"coefs", to_json(ex)}});
    }
    return a;
}

} // namespace

Json report_json(const MLProblem& pb, const SolveReport& r) {
    Json j;
    j["mode"] = mode_name(pb.mode);
    j["semantics"] = pb.semantics == Semantics::Jet ? "jet" : "exact";
    if (pb.mode == Mode::Differentials) j["diff_mode"] = pb.diff_mode == DiffMode::Principal ? "principal" : "generalized";
    j["verdict"] = verdict_name(r.verdict);
    j["criterion"] = r.criterion;
    Json basis = Json::array();
    for (auto& b : r.basis) basis.push_back(pb.mode == Mode::Functions ? "(" + b.str() + ") dt" : b.str());
    j["basis"] = basis;
    Json res = Json::array();
    for (auto& x : r.residuals) res.push_back({{"exact", str(x.exact)}, {"tail_bound", x.tail ? Json(x.tail->str()) : Json("unbounded")}});
    j["residuals"] = res;
    if (r.residue_sum) j["residue_sum"] = str(*r.residue_sum);
    if (r.certificate)
        j["certificate"] = {{"index", r.certificate->index},
                            {"element", pb.mode == Mode::Functions ? "(" + r.certificate->element.str() + ") dt"
                                                                   : r.certificate->element.str()},
                            {"pairing", str(r.certificate->value)}};
    else
        j["certificate"] = nullptr;
    if (r.solution) {
        Json s = to_json(*r.solution);
        if (pb.mode == Mode::Differentials) s["text"] = "(" + r.solution->str() + ") dt";
        j["solution"] = s;
        j["jets"] = jets_json(pb, *r.solution);
    } else {
        j["solution"] = nullptr;
    }
    j["error_exp"] = r.error_exp ? Json(r.error_exp->str()) : Json("unbounded");
    if (r.system) {
        Json cols = Json::array();
        for (auto& c : r.system->columns) cols.push_back({{"end", c.end}, {"exp", c.l}});
        j["correction_system"] = {{"columns", cols},
                                  {"det_exp", r.system->det_exp.str()},
                                  {"minor_exp", r.system->minor_exp.str()},
                                  {"scanned", r.system->scanned}};
    }
    Json tr = Json::array();
    bool cramer = true;
    for (auto& d : r.trace) {
        Json x = Json::array();
        for (auto& v : d.x) x.push_back(str(v));
        cramer = cramer && d.cramer_ok;
        tr.push_back({{"l", d.l},
                      {"B", d.B.str()},
                      {"certified_B", d.certified_bounded ? Json(d.certified_B.str()) : Json("unbounded")},
                      {"corrections", x},
                      {"cramer_bound", d.cramer_bound.str()},
                      {"distance", d.step_distance ? Json(d.step_distance->str()) : Json(nullptr)}});
    }
    j["cauchy_trace"] = tr;
    j["cramer_ok"] = cramer;
    j["jets_verified"] = r.jets_verified;
    if (r.oracle) j["oracle"] = oracle_json(*r.oracle);
    j["notes"] = r.notes;
    return j;
}

namespace {

OrientedAnnulus json_annulus(const Json& j) {
    OrientedAnnulus a;
    a.end = {0, json_point(j, "center")};
    a.q1 = json_rational(j, "q1");
    a.q2 = json_rational(j, "q2");
    if (!(a.q1 < a.q2)) throw Error(ErrorCode::RadiusOutOfRange, "annulus needs q1 < q2");
    std::string t = j.contains("toward") ? json_string(j, "toward") : "inner";
    if (t != "inner" && t != "outer") schema("toward must be inner or outer");
    a.toward = t == "inner" ? Toward::Inner : Toward::Outer;
    return a;
}

Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (auto& x : v) a.push_back(str(x));
    return a;
}

void apply_overrides(ProblemFile& pf, const RunOptions& opt) {
    if (opt.depth) pf.depth = *opt.depth;
    if (opt.mode) pf.problem.mode = parse_mode(*opt.mode);
    if (opt.semantics) pf.problem.semantics = parse_semantics(*opt.semantics);
    if (opt.diff_mode) pf.problem.diff_mode = parse_diff_mode(*opt.diff_mode);
}

RunResult dispatch(const std::string& cmd, const Json& in, const RunOptions& opt) {
    RunResult out;
    Json& r = out.report;
    r["command"] = cmd;
    if (opt.seed) r["seed"] = *opt.seed;

    if (cmd == "residue") {
        long p = json_long(in, "p");
        PContext ctx(p);
        AnnularDifferential w{json_annulus(need(in, "annulus")), json_chunk(need(in, "series"), p)};
        r["residue"] = str(residue(w));
        r["ok"] = true;
    } else if (cmd == "pullback") {
        long p = json_long(in, "p");
        PContext ctx(p);
        AnnularDifferential w{json_annulus(need(in, "annulus")), json_chunk(need(in, "series"), p)};
        LaurentChunk f = json_chunk(need(in, "map"), p);
        const Json& win = need(in, "window");
        AnnularDifferential pb = pullback(ctx, w, f, json_rational(in, "q1"), json_rational(in, "q2"),
                                          Window{win.at(0).get<long>(), win.at(1).get<long>()});
        Rational before = residue(w), after = residue(pb);
        r["series"] = to_json(pb.series);
        r["toward"] = pb.annulus.toward == Toward::Inner ? "inner" : "outer";
        r["residue_before"] = str(before);
        r["residue_after"] = str(after);
        r["ok"] = before == after;
    } else if (cmd == "check-residue-theorem") {
        WideOpenDomain W = json_domain(in);
        ResidueTheoremResult res = residue_theorem_check(W, RationalDiff{json_function(need(in, "differential"))});
        r["per_end"] = rationals(res.per_end);
        r["sum"] = str(res.sum);
        r["ok"] = res.sum == 0;
    } else if (cmd == "check-inside-outside") {
        WideOpenDomain W = json_domain(in);
        Subcurve X{W, {}};
        for (auto& t : need(in, "trims")) X.trims.push_back(t.is_null() ? std::nullopt : std::optional<Rational>(rational_value(t, "trims")));
        InsideOutsideResult res = inside_outside_check(X, RationalDiff{json_function(need(in, "differential"))});
        r["inner_sum"] = str(res.inner_sum);
        r["outer_sum"] = str(res.outer_sum);
        r["ok"] = res.equal;
    } else if (cmd == "check-splitting") {
        WideOpenDomain W = json_domain(in);
        SplittingResult res = splitting_check(W, json_rational(in, "center"), json_rational(in, "r1"),
                                              json_rational(in, "r2"), RationalDiff{json_function(need(in, "differential"))});
        r["u_ends"] = res.u_ends;
        r["v_ends"] = res.v_ends;
        r["sum_u"] = str(res.sum_u);
        r["sum_v"] = str(res.sum_v);
        r["cut_residue"] = str(res.cut_residue);
        r["ok"] = res.antisymmetric;
    } else if (cmd == "basis") {
        Divisor d;
        for (auto& t : need(in, "divisor")) d[json_point(t, "point")] += json_long(t, "mult");
        std::string kind = opt.basis_kind ? *opt.basis_kind : in.contains("kind") ? json_string(in, "kind") : "l1";
        Json el = Json::array();
        if (kind == "l1") {
            for (auto& w : l1_basis(d)) el.push_back(to_json(w.fn));
        } else if (kind == "ld") {
            for (auto& f : ld_basis(d)) el.push_back(to_json(f));
        } else {
            schema("basis kind must be l1 or ld");
        }
        r["kind"] = kind;
        r["degree"] = degree(d);
        r["dimension"] = el.size();
        r["elements"] = el;
    } else if (cmd == "solve-classical") {
        std::vector<Point> pts;
        for (auto& x : need(in, "points")) pts.push_back(x.is_string() && x.get<std::string>() == "inf" ? Point::infinity() : Point::finite(rational_value(x, "points")));
        std::vector<long> tops = need(in, "tops").get<std::vector<long>>();
        std::vector<LaurentChunk> data;
        for (auto& c : need(in, "data")) data.push_back(json_chunk(c, 2));
        if (tops.size() != pts.size() || data.size() != pts.size()) schema("points, tops and data must have equal length");
        Mode mode = parse_mode(opt.mode ? *opt.mode : in.contains("mode") ? json_string(in, "mode") : "functions");
        DiffMode dm = parse_diff_mode(opt.diff_mode ? *opt.diff_mode : in.contains("diff_mode") ? json_string(in, "diff_mode") : "principal");
        JetSolveResult res = mode == Mode::Functions ? classical_jet_solve_functions(pts, tops, data)
                                                     : classical_jet_solve_differentials(pts, tops, data, dm);
        r["verdict"] = res.solvable ? "SOLVABLE" : "UNSOLVABLE";
        r["solution"] = res.solvable ? to_json(res.solution) : Json(nullptr);
        if (res.certificate)
            r["certificate"] = {{"index", res.certificate->index}, {"element", to_json(res.certificate->element)},
                                {"pairing", str(res.certificate->value)}};
        out.exit_code = res.solvable ? 0 : 2;
    } else if (cmd == "solve") {
        ProblemFile pf = parse_problem(in);
        apply_overrides(pf, opt);
        SolveReport rep = solve(pf.problem, pf.depth);
        if (opt.oracle) cross_check(pf.problem, rep, pf.depth);
        r["depth"] = pf.depth;
        r.update(report_json(pf.problem, rep));
        out.exit_code = exit_code_for(rep.verdict);
    } else if (cmd == "complete") {
        ProblemFile pf = parse_problem(in);
        apply_overrides(pf, opt);
        Completion c = complete_partial_data(pf.problem, pf.depth);
        if (opt.oracle) cross_check(c.problem, c.report, pf.depth);
        r["depth"] = pf.depth;
        Json filled = Json::array();
        for (std::size_t i = 0; i < c.problem.ends.size(); ++i)
            if (pf.problem.ends[i].free) filled.push_back({{"end", i}, {"data", to_json(c.problem.ends[i].data)}});
        r["completed"] = filled;
        r.update(report_json(c.problem, c.report));
        out.exit_code = exit_code_for(c.report.verdict);
    } else if (cmd == "decompose") {
        long p = in.contains("p") ? json_long(in, "p") : 2;
        MLDecomposition d = ml_decomposition(json_chunk(need(in, "series"), p));
        r["plus"] = to_json(d.plus);
        r["minus"] = to_json(d.minus);
        r["ok"] = true;
    } else if (cmd == "approx") {
        WideOpenDomain W = json_domain(in);
        std::vector<Rational> trims;
        for (auto& t : need(in, "trims")) trims.push_back(rational_value(t, "trims"));
        AffinoidSlice X(W, trims);
        std::vector<Point> allowed;
        for (auto& x : need(in, "allowed")) allowed.push_back(x.is_string() && x.get<std::string>() == "inf" ? Point::infinity() : Point::finite(rational_value(x, "allowed")));
        RationalFn f = json_function(need(in, "function"));
        Rational eps = json_rational(in, "eps");
        RungeResult g = runge_approximate(f, X, allowed, eps);
        NormExp achieved = spectral_norm_exp(X, f - g.approximant);
        r["approximant"] = to_json(g.approximant);
        r["certified_error"] = g.certified_error.str();
        r["achieved_error"] = achieved.str();
        r["ok"] = achieved <= NormExp(eps);
    } else {
        schema("unknown command '" + cmd + "'");
    }
    if (r.contains("ok") && !r["ok"].get<bool>()) out.exit_code = 2;
    return out;
}

} // namespace

RunResult run_command(const std::string& command, const Json& input, const RunOptions& opt) {
    try {
        return dispatch(command, input, opt);
    } catch (const Error& e) {
        RunResult out;
        out.report = {{"command", command}, {"error", error_name(e.code())}, {"message", e.what()}};
        out.exit_code = 1;
        return out;
    } catch (const nlohmann::json::exception& e) {
        RunResult out;
        out.report = {{"command", command}, {"error", "SchemaError"}, {"message", e.what()}};
        out.exit_code = 1;
        return out;
    }
}

} // namespace wideopen
