#include "cli_support.hpp"

#include "ellfrob/errors.hpp"
#include "ellfrob/weyl_invariants.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace ellfrob;
using namespace ellfrob::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Common {
    Overrides flags;
    std::string config;
    std::string u_grid_text;

    void attach(CLI::App* app, bool quadrature) {
        app->add_option("--seed", flags.seed, "RNG seed for sampled suites");
        app->add_option("--samples", flags.samples, "sample count for sampled suites");
        app->add_option("--tail-tol", flags.tail_tol, "relative size at which series summation stops");
        app->add_option("--max-terms", flags.max_terms, "hard cap on series terms");
        app->add_option("--workers", flags.workers, "worker threads");
        app->add_option("--format", flags.format, "json or csv");
        app->add_option("--out", flags.out, "write the report here instead of stdout");
        app->add_option("--config", config, "TOML file; flags take precedence over it");
        if (quadrature) {
            app->add_option("--quad-tol", flags.quad_tol, "panel-doubling tolerance");
            app->add_option("--n-quad", flags.n_quad, "Gauss-Legendre nodes per panel (10,15,20,25,30)");
            app->add_option("--u-grid", u_grid_text, "comma-separated increasing u values");
        }
    }

    RunSettings settings() {
        if (!u_grid_text.empty()) flags.u_grid = parse_real_list(u_grid_text);
        const Overrides file = config.empty() ? Overrides{} : read_toml(config);
        return resolve(flags, file);
    }
    bool format_given() const { return flags.format.has_value() || !config.empty(); }
};

void emit(const RunSettings& s, const std::string& text) {
    if (s.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(s.out);
    if (!f) throw std::invalid_argument("cannot open " + s.out + " for writing");
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

FlatPoint flat_point(const std::string& text) {
    const auto v = parse_complex_list(text, 3);
    return {v[0], v[1], HalfPlanePoint(v[2])};
}

ModuliPoint moduli_point(const std::string& text) {
    const auto v = parse_complex_list(text, 3);
    return {v[0], v[1], HalfPlanePoint(v[2])};
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string tau = "0+1i", z, x, phi = "0", t, s;
    int order = 1;
};

using Evaluator = std::function<cplx(const EvalArgs&, const SeriesConfig&)>;

cplx need(const std::string& v, const char* flag) {
    if (v.empty()) throw std::invalid_argument(std::string("this function needs ") + flag);
    return parse_complex(v);
}

TildeEPoint tilde_point(const EvalArgs& a) {
    return {need(a.phi, "--phi"), need(a.x, "--x"), HalfPlanePoint(need(a.tau, "--tau"))};
}

const std::map<std::string, Evaluator>& evaluators() {
    static const std::map<std::string, Evaluator> m{
        {"E2", [](const EvalArgs& a, const SeriesConfig& c) { return eisenstein(2, parse_complex(a.tau), c); }},
        {"E4", [](const EvalArgs& a, const SeriesConfig& c) { return eisenstein(4, parse_complex(a.tau), c); }},
        {"E6", [](const EvalArgs& a, const SeriesConfig& c) { return eisenstein(6, parse_complex(a.tau), c); }},
        {"DE2", [](const EvalArgs& a, const SeriesConfig& c) { return eisenstein_tau_derivative(2, a.order, parse_complex(a.tau), c); }},
        {"DE4", [](const EvalArgs& a, const SeriesConfig& c) { return eisenstein_tau_derivative(4, a.order, parse_complex(a.tau), c); }},
        {"DE6", [](const EvalArgs& a, const SeriesConfig& c) { return eisenstein_tau_derivative(6, a.order, parse_complex(a.tau), c); }},
        {"eta", [](const EvalArgs& a, const SeriesConfig& c) { return dedekind_eta(parse_complex(a.tau), c); }},
        {"e1", [](const EvalArgs& a, const SeriesConfig& c) { return half_periods_any(parse_complex(a.tau), c).e1; }},
        {"e2", [](const EvalArgs& a, const SeriesConfig& c) { return half_periods_any(parse_complex(a.tau), c).e2; }},
        {"e3", [](const EvalArgs& a, const SeriesConfig& c) { return half_periods_any(parse_complex(a.tau), c).e3; }},
        {"theta", [](const EvalArgs& a, const SeriesConfig& c) { return theta11_d(a.order, need(a.x, "--x"), parse_complex(a.tau), c); }},
        {"wp", [](const EvalArgs& a, const SeriesConfig& c) { return weierstrass(WeierstrassKind::p, {need(a.z, "--z"), parse_complex(a.tau)}, c); }},
        {"wp_dz", [](const EvalArgs& a, const SeriesConfig& c) { return weierstrass(WeierstrassKind::p_dz, {need(a.z, "--z"), parse_complex(a.tau)}, c); }},
        {"zeta", [](const EvalArgs& a, const SeriesConfig& c) { return weierstrass(WeierstrassKind::zeta, {need(a.z, "--z"), parse_complex(a.tau)}, c); }},
        {"potential", [](const EvalArgs& a, const SeriesConfig& c) {
             if (a.t.empty()) throw std::invalid_argument("potential needs --t t1,t2,tau");
             return potential(flat_point(a.t), c);
         }},
        {"discriminant", [](const EvalArgs& a, const SeriesConfig& c) {
             if (a.t.empty()) throw std::invalid_argument("discriminant needs --t t1,t2,tau");
             return discriminant(flat_point(a.t), c);
         }},
        {"unfolding", [](const EvalArgs& a, const SeriesConfig& c) {
             if (a.t.empty()) throw std::invalid_argument("unfolding needs --t t1,t2,tau and --z");
             return unfolding_flat(need(a.z, "--z"), flat_point(a.t), c);
         }},
        {"y1", [](const EvalArgs& a, const SeriesConfig& c) { return invariants(tilde_point(a), c).y1; }},
        {"y2", [](const EvalArgs& a, const SeriesConfig& c) { return invariants(tilde_point(a), c).y2; }},
        {"y3", [](const EvalArgs& a, const SeriesConfig& c) { return invariants(tilde_point(a), c).y3; }},
        {"J", [](const EvalArgs& a, const SeriesConfig& c) { return invariants(tilde_point(a), c).J; }},
    };
    return m;
}

int cmd_eval(const std::string& fn, const EvalArgs& args, Common& common) {
    const RunSettings s = common.settings();
    const auto it = evaluators().find(fn);
    if (it == evaluators().end()) {
        std::string names;
        for (const auto& [k, _] : evaluators()) names += " " + k;
        throw std::invalid_argument("unknown function '" + fn + "'; known:" + names);
    }
    const cplx v = it->second(args, s.run.series);
    // truncation estimate: the change when the stopping tolerance is loosened a thousandfold
    SeriesConfig loose = s.run.series;
    loose.tail_tol *= 1e3;
    const double err = std::abs(it->second(args, loose) - v);
    if (s.format == Format::csv)
        emit(s, "function,re,im,error_estimate\n" + fn + "," + format_double(v.real()) + "," + format_double(v.imag()) +
                    "," + format_double(err) + "\n");
    else
        emit(s, dump({{"function", fn}, {"value", to_json(v)}, {"error_estimate", err}}));
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, Common& common) {
    const RunSettings s = common.settings();
    std::vector<std::string> names;
    if (suite == "all") names = suite_names();
    else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) names = {suite};
    else throw std::invalid_argument("unknown suite '" + suite + "' (identities, frobenius, lattice, invariants, gamma, all)");

    std::vector<SuiteReport> reports;
    bool ok = true;
    for (const auto& n : names) {
        reports.push_back(run_suite(n, s.run));
        ok = ok && reports.back().passed();
    }
    if (s.format == Format::csv) {
        std::ostringstream os;
        os << "suite,id,tag,value,threshold,compare,gating,passed,note\n";
        for (const auto& r : reports)
            for (const auto& c : r.checks)
                os << r.suite << ',' << csv_escape(c.id) << ',' << csv_escape(c.tag) << ',' << format_double(c.value) << ','
                   << format_double(c.threshold) << ',' << (c.compare == Compare::at_most ? "at_most" : "at_least") << ','
                   << (c.gating ? "true" : "false") << ',' << (c.passed() ? "true" : "false") << ',' << csv_escape(c.note)
                   << '\n';
        emit(s, os.str());
    } else {
        json js = json::array();
        for (const auto& r : reports) js.push_back(to_json(r));
        emit(s, dump({{"config", to_json(s.run)}, {"passed", ok}, {"suites", js}}));
    }
    return ok ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------- braid

ClassTriple parse_triple(const std::string& start, const std::string& basis_text) {
    if (start == "P") return projective_triple();
    const Basis b = parse_basis(basis_text);
    ClassTriple t;
    std::stringstream ss(start);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ';')) {
        if (k == 3) throw ParseError("start triple needs exactly 3 classes");
        const auto v = parse_real_list(item);
        if (v.size() != 3) throw ParseError("class '" + item + "' needs 3 coordinates");
        KClass c{{}, b};
        for (int i = 0; i < 3; ++i) {
            const double x = v[static_cast<std::size_t>(i)];
            if (x != std::floor(x)) throw ParseError("class coordinates must be integers");
            c.coords[static_cast<std::size_t>(i)] = static_cast<Int>(x);
        }
        t[static_cast<std::size_t>(k++)] = c;
    }
    if (k != 3) throw ParseError("start triple needs exactly 3 classes");
    return t;
}

int cmd_braid(const std::string& word_text, const std::string& start, const std::string& basis, Common& common) {
    const RunSettings s = common.settings();
    const BraidWord w = parse_braid_word(word_text);
    const ClassTriple in = parse_triple(start, basis);
    const ClassTriple out = mutate(in, w);
    const Mat2 g = braid_to_sl2(w);
    if (s.format == Format::csv) {
        std::ostringstream os;
        os << "index,P1,P2,P3,R1,R2,R3\n";
        for (std::size_t i = 0; i < 3; ++i) {
            const auto p = out[i].in(Basis::P).coords, r = out[i].in(Basis::R).coords;
            os << i + 1 << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',' << r[0] << ',' << r[1] << ',' << r[2] << '\n';
        }
        emit(s, os.str());
    } else {
        json triple = json::array();
        for (const auto& c : out) triple.push_back(to_json(c));
        emit(s, dump({{"word", to_string(w)},
                      {"triple", triple},
                      {"exceptional", is_class_exceptional(out)},
                      {"sl2", json::array({json(g[0]), json(g[1])})}}));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- ll

int cmd_ll(const std::string& mode, const std::string& s_text, const std::string& u_text, Common& common) {
    const RunSettings s = common.settings();
    if (mode == "forward") {
        if (s_text.empty()) throw std::invalid_argument("ll forward needs --s s1,s2,tau");
        const ModuliPoint p = moduli_point(s_text);
        const Triple u = lyashko_looijenga(p, s.run.series);
        if (s.format == Format::csv) {
            std::ostringstream os;
            os << "u1_re,u1_im,u2_re,u2_im,u3_re,u3_im\n";
            for (int i = 0; i < 3; ++i)
                os << format_double(u[static_cast<std::size_t>(i)].real()) << ',' << format_double(u[static_cast<std::size_t>(i)].imag())
                   << (i < 2 ? "," : "\n");
            emit(s, os.str());
        } else {
            emit(s, dump({{"u", {to_json(u[0]), to_json(u[1]), to_json(u[2])}},
                          {"discriminant", to_json(u[0] * u[1] * u[2])}}));
        }
        return kExitOk;
    }
    if (mode == "inverse") {
        if (u_text.empty()) throw std::invalid_argument("ll inverse needs --u u1,u2,u3");
        const auto v = parse_complex_list(u_text, 3);
        const Triple u{v[0], v[1], v[2]};
        const ModuliPoint p = ll_inverse(u, s.run.series);
        const double dist = multiset_distance(lyashko_looijenga(p, s.run.series), u);
        if (s.format == Format::csv) {
            emit(s, "s1_re,s1_im,s2_re,s2_im,tau_re,tau_im,round_trip\n" + format_double(p.s1().real()) + "," +
                        format_double(p.s1().imag()) + "," + format_double(p.s2().real()) + "," + format_double(p.s2().imag()) +
                        "," + format_double(p.tau().tau().real()) + "," + format_double(p.tau().tau().imag()) + "," +
                        format_double(dist) + "\n");
        } else {
            emit(s, dump({{"s1", to_json(p.s1())}, {"s2", to_json(p.s2())}, {"tau", to_json(p.tau().tau())}, {"round_trip", dist}}));
        }
        return dist <= 1e-6 ? kExitOk : kExitFail;
    }
    throw std::invalid_argument("ll mode must be forward or inverse");
}

// ---------------------------------------------------------------- roots

int cmd_roots(int bound, Common& common) {
    const RunSettings s = common.settings();
    if (bound < 0) throw std::invalid_argument("--bound must be nonnegative");
    const auto roots = enumerate_roots(bound);
    if (s.format == Format::json && common.format_given()) {
        json arr = json::array();
        for (const auto& r : roots) arr.push_back(r.in(Basis::R).coords);
        emit(s, dump({{"basis", "R"}, {"bound", bound}, {"roots", arr}}));
    } else {
        std::ostringstream os;
        os << "alpha,delta1,delta2\n";
        for (const auto& r : roots) {
            const auto c = r.in(Basis::R).coords;
            os << c[0] << ',' << c[1] << ',' << c[2] << '\n';
        }
        emit(s, os.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------- gamma

int cmd_gamma(const std::string& t_text, Common& common) {
    const RunSettings s = common.settings();
    const FlatPoint t = flat_point(t_text);
    const GammaResiduals g = gamma_identities();
    json fits = json::array();
    std::ostringstream csv;
    csv << "combination,leading_re,leading_im,subleading_re,subleading_im,leading_target_re,leading_target_im,"
           "subleading_target_re,subleading_target_im,fit_residual\n";
    for (PeriodCombo c : {PeriodCombo::path1, PeriodCombo::path2, PeriodCombo::path3}) {
        const AsymptoticFit f = asymptotic_fit(c, t, s.run.u_grid, s.run.quad, s.run.series);
        const PeriodTargets tg = period_targets(c, t, s.run.series);
        fits.push_back(to_json(f, tg));
        csv << combo_name(c);
        for (cplx z : {f.leading, f.subleading, tg.leading, tg.subleading})
            csv << ',' << format_double(z.real()) << ',' << format_double(z.imag());
        csv << ',' << format_double(f.relative_residual) << '\n';
    }
    if (s.format == Format::csv) {
        emit(s, csv.str());
        return kExitOk;
    }
    json images = json::array();
    for (const auto& k : kclass_correspondence())
        images.push_back({{"class", k.name},
                          {"P", k.k_class.in(Basis::P).coords},
                          {"expected", {to_json(k.expected(0)), to_json(k.expected(1)), to_json(k.expected(2))}},
                          {"computed", {to_json(k.computed(0)), to_json(k.computed(1)), to_json(k.computed(2))}}});
    emit(s, dump({{"t", {to_json(t.t1), to_json(t.t2), to_json(t.tau.tau())}},
                  {"u_grid", s.run.u_grid},
                  {"matrix_identities", {{"serre_conjugation", g.serre}, {"euler_pairing", g.euler}}},
                  {"kclass_images", images},
                  {"fits", fits}}));
    return kExitOk;
}

// ---------------------------------------------------------------- frobenius

int cmd_frobenius(const std::string& t_text, const std::string& s_text, Common& common) {
    const RunSettings s = common.settings();
    if (t_text.empty() == s_text.empty()) throw std::invalid_argument("give exactly one of --t t1,t2,tau or --s s1,s2,tau");
    const FlatPoint t = t_text.empty() ? moduli_point(s_text).flat(s.run.series) : flat_point(t_text);
    const FrobeniusTensors f = frobenius_tensors(t, s.run.series);
    if (s.format == Format::csv) {
        std::ostringstream os;
        os << "k,i,j,re,im\n";
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const cplx v = f.C[static_cast<std::size_t>(k)](i, j);
                    os << k + 1 << ',' << i + 1 << ',' << j + 1 << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
                }
        emit(s, os.str());
    } else {
        emit(s, dump({{"t", {to_json(t.t1), to_json(t.t2), to_json(t.t3())}},
                      {"potential", to_json(f.potential_value)},
                      {"eta", to_json(f.eta)},
                      {"structure_constants", to_json(f.C)},
                      {"intersection_form", to_json(f.g)},
                      {"christoffel", to_json(f.Gamma)},
                      {"wdvv_residual", wdvv_residual(f.C)},
                      {"discriminant", to_json(discriminant(t, s.run.series))}}));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frobenius manifold toolkit: special functions, lattice actions, invariants and period checks"};
    app.require_subcommand(1);
    std::function<int()> action;

    Common c_eval, c_verify, c_braid, c_ll, c_roots, c_gamma, c_frob;

    auto* eval = app.add_subcommand("eval", "evaluate one function");
    std::string fn;
    EvalArgs ea;
    eval->add_option("function", fn, "E2 E4 E6 DE2 DE4 DE6 eta e1 e2 e3 theta wp wp_dz zeta potential discriminant unfolding y1 y2 y3 J")->required();
    eval->add_option("--tau", ea.tau, "modulus re+imi");
    eval->add_option("--z", ea.z, "torus point");
    eval->add_option("--x", ea.x, "torus point for theta and the invariants");
    eval->add_option("--phi", ea.phi, "the phi coordinate for the invariants");
    eval->add_option("--t", ea.t, "flat point t1,t2,tau");
    eval->add_option("--order", ea.order, "derivative order");
    c_eval.attach(eval, false);
    eval->callback([&] { action = [&] { return cmd_eval(fn, ea, c_eval); }; });

    auto* verify = app.add_subcommand("verify", "run verification suites and report residuals");
    std::string suite = "all";
    verify->add_option("suite", suite, "identities, frobenius, lattice, invariants, gamma or all");
    c_verify.attach(verify, true);
    verify->callback([&] { action = [&] { return cmd_verify(suite, c_verify); }; });

    auto* braid = app.add_subcommand("braid", "act on an exceptional triple by a braid word");
    std::string word, start = "P", basis = "P";
    braid->add_option("word", word, "e.g. \"s1 s2^-1 [1,0,2]\"")->required();
    braid->add_option("--start", start, "P for the projectives, or three classes \"a,b,c;d,e,f;g,h,i\"");
    braid->add_option("--basis", basis, "basis of explicit start classes: P, S or R");
    c_braid.attach(braid, false);
    braid->callback([&] { action = [&] { return cmd_braid(word, start, basis, c_braid); }; });

    auto* ll = app.add_subcommand("ll", "Lyashko-Looijenga map and its inverse");
    std::string mode, s_text, u_text;
    ll->add_option("mode", mode, "forward or inverse")->required();
    ll->add_option("--s", s_text, "s1,s2,tau for forward");
    ll->add_option("--u", u_text, "u1,u2,u3 for inverse");
    c_ll.attach(ll, false);
    ll->callback([&] { action = [&] { return cmd_ll(mode, s_text, u_text, c_ll); }; });

    auto* roots = app.add_subcommand("roots", "list real roots with |p|,|q| <= bound");
    int bound = 2;
    roots->add_option("--bound", bound, "height bound");
    c_roots.attach(roots, false);
    roots->callback([&] { action = [&] { return cmd_roots(bound, c_roots); }; });

    auto* gamma = app.add_subcommand("gamma", "Gamma matrix identities and period asymptotics");
    std::string gt = "-1,1,0+1i";
    gamma->add_option("--t", gt, "flat point t1,t2,tau in the real chamber");
    c_gamma.attach(gamma, true);
    gamma->callback([&] { action = [&] { return cmd_gamma(gt, c_gamma); }; });

    auto* frob = app.add_subcommand("frobenius", "Frobenius tensors at a point");
    std::string ft, fs;
    frob->add_option("--t", ft, "flat point t1,t2,tau");
    frob->add_option("--s", fs, "raw point s1,s2,tau");
    c_frob.attach(frob, false);
    frob->callback([&] { action = [&] { return cmd_frobenius(ft, fs, c_frob); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    try {
        return action();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
}
