#include "fsl/scenario.hpp"

#include "fsl/oracles.hpp"
#include "fsl/svg.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fsl::scenario {

using algebra::AlgebraKind;
using algebra::AlgebraParams;
using json = nlohmann::ordered_json;
using numerics::Complex;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_complex(Complex z) { return fmt17(z.real()) + " " + fmt17(z.imag()); }

// ---------------------------------------------------------------------------
// Canonical serialization + hash
// ---------------------------------------------------------------------------

std::string state_signature(const states::StateSpec& s) {
    using namespace states;
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Fock>) {
                std::string out = "fock";
                for (double x : v.label) out += " " + fmt17(x);
                return out;
            } else if constexpr (std::is_same_v<T, GlauberCoherent>) {
                return "glauber " + fmt_complex(v.alpha);
            } else if constexpr (std::is_same_v<T, SpinCoherent>) {
                return "spin " + fmt17(v.theta) + " " + fmt17(v.phi);
            } else if constexpr (std::is_same_v<T, Su3Coherent>) {
                return "su3coh " + fmt_complex(v.beta[0]) + " " + fmt_complex(v.beta[1]) +
                       " " + fmt_complex(v.beta[2]);
            } else if constexpr (std::is_same_v<T, GaussianFsl>) {
                std::string out = "gauss " + fmt17(v.sigma);
                for (double x : v.center) out += " " + fmt17(x);
                return out;
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return "squeezed " + fmt_complex(v.beta);
            } else {
                return "e2site " + std::to_string(v.j);
            }
        },
        s);
}

std::string coin_signature(const walk::CoinSpec& c) {
    switch (c.kind) {
        case walk::CoinSpec::Kind::Hadamard: return "hadamard";
        case walk::CoinSpec::Kind::Grover: return "grover";
        case walk::CoinSpec::Kind::Custom: {
            std::string out = "custom";
            for (Eigen::Index i = 0; i < c.custom.size(); ++i)
                out += " " + fmt_complex(c.custom.data()[i]);
            return out;
        }
    }
    return "?";
}

std::string coin_init_signature(const states::CoinInit& c) {
    switch (c.kind) {
        case states::CoinInit::Kind::SymmetricPlusI: return "symmetric_plus_i";
        case states::CoinInit::Kind::GroverSymmetric: return "grover_symmetric";
        case states::CoinInit::Kind::Custom: {
            std::string out = "custom";
            for (Eigen::Index i = 0; i < c.custom.size(); ++i)
                out += " " + fmt_complex(c.custom[i]);
            return out;
        }
    }
    return "?";
}

std::string canonical_text(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "fslwalk " << kVersion << "\nname " << cfg.name << "\nseed " << cfg.seed
       << "\nrecord_every " << cfg.record_every << "\nfit " << cfg.fit_lo << " " << cfg.fit_hi
       << "\ncsv_min " << fmt17(cfg.csv_min_probability) << "\n";
    for (const auto& v : cfg.variants) {
        os << "variant " << v.label << "\nkind " << algebra::kind_name(v.kind) << "\nparams "
           << v.params.n_max << " " << v.params.two_S << " " << v.params.boson_number << " "
           << v.params.window << " " << (v.params.sector == algebra::Su11Sector::Even ? 0 : 1)
           << " " << v.params.guard_band << "\nauto_trunc " << v.auto_truncation << " "
           << fmt17(v.truncation_safety) << "\nstate " << state_signature(v.state) << "\ncoin "
           << coin_signature(v.coin) << "\ncoin_init " << coin_init_signature(v.coin_init)
           << "\nbeta " << fmt_complex(v.beta) << "\nsteps " << v.steps << "\nleak "
           << fmt17(v.leakage_threshold) << "\n";
        if (v.noise)
            os << "noise " << fmt17(v.noise->epsilon) << " " << v.noise->realizations << "\n";
    }
    return os.str();
}

}  // namespace

std::string config_hash(const ScenarioConfig& config) {
    std::string text = canonical_text(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

VariantSpec hw_variant(double alpha, double beta, int steps) {
    VariantSpec v;
    v.kind = AlgebraKind::HeisenbergWeyl;
    v.auto_truncation = true;
    v.state = states::GlauberCoherent{Complex(alpha, 0.0)};
    v.coin = walk::CoinSpec::hadamard();
    v.coin_init = states::CoinInit::symmetric_plus_i();
    v.beta = Complex(beta, 0.0);
    v.steps = steps;
    return v;
}

ScenarioConfig make_fig2(double beta, const char* name) {
    ScenarioConfig c;
    c.name = name;
    c.record_every = 10;
    c.fit_lo = 10;
    c.fit_hi = 30;
    c.variants.push_back(hw_variant(40.0, beta, 30));
    return c;
}

ScenarioConfig make_fig3() {
    ScenarioConfig c;
    c.name = "fig3";
    c.record_every = 25;
    c.fit_lo = 10;
    VariantSpec v;
    v.kind = AlgebraKind::Su2;
    v.params = AlgebraParams::su2(5000);
    v.state = states::SpinCoherent{M_PI / 2.0, M_PI / 2.0};
    v.coin = walk::CoinSpec::hadamard();
    // The equal-weight real coin reproduces the strongly asymmetric
    // distributions of the imaginary-step walk; see README.
    Eigen::VectorXcd amps(2);
    amps << Complex(1.0, 0.0), Complex(1.0, 0.0);
    v.coin_init = states::CoinInit::custom_amplitudes(amps / std::sqrt(2.0));
    v.beta = Complex(0.0, 0.01);
    v.steps = 75;
    c.variants.push_back(std::move(v));
    return c;
}

VariantSpec su3_variant(int N, double beta, int steps) {
    VariantSpec v;
    v.kind = AlgebraKind::Su3;
    v.params = AlgebraParams::su3(N);
    double b = 1.0 / std::sqrt(3.0);
    v.state = states::Su3Coherent{{Complex(b, 0), Complex(b, 0), Complex(b, 0)}};
    v.coin = walk::CoinSpec::grover();
    v.coin_init = states::CoinInit::grover_symmetric();
    v.beta = Complex(beta, 0.0);
    v.steps = steps;
    return v;
}

VariantSpec so5_variant(int N, double beta, int steps) {
    VariantSpec v;
    v.kind = AlgebraKind::So5;
    v.params = AlgebraParams::so5(N);
    double q = N / 4.0;
    v.state = states::GaussianFsl{{q, q, q, q}, std::sqrt(double(N)) / 2.0};
    v.coin = walk::CoinSpec::grover();
    v.coin_init = states::CoinInit::grover_symmetric();
    v.beta = Complex(beta, 0.0);
    v.steps = steps;
    return v;
}

ScenarioConfig make_fig4(bool su3, const char* name) {
    ScenarioConfig c;
    c.name = name;
    c.record_every = 5;
    c.variants.push_back(su3 ? su3_variant(120, 0.2, 5) : so5_variant(120, 0.2, 5));
    return c;
}

ScenarioConfig make_fig5() {
    ScenarioConfig c;
    c.name = "fig5";
    c.record_every = 1;
    const double betas[] = {0.5, 0.2, 0.1, 0.02};
    for (double b : betas) {
        VariantSpec v = su3_variant(120, b, static_cast<int>(std::lround(1.0 / b)));
        v.label = "su3_beta" + fmt17(b);
        c.variants.push_back(std::move(v));
    }
    for (double b : betas) {
        VariantSpec v = so5_variant(120, b, static_cast<int>(std::lround(1.0 / b)));
        v.label = "so5_beta" + fmt17(b);
        c.variants.push_back(std::move(v));
    }
    return c;
}

ScenarioConfig make_fig6() {
    ScenarioConfig c;
    c.name = "fig6";
    c.record_every = 10;
    c.fit_lo = 10;
    c.fit_hi = 60;
    c.seed = 20250901;
    c.seed_set = true;
    // epsilon grid between 0 and 1 (the printed figure does not list it)
    const double eps[] = {0.0, 0.1, 0.3, 1.0};
    for (double e : eps) {
        VariantSpec v = hw_variant(30.0, 1.0, 60);
        v.label = "eps" + fmt17(e);
        v.noise = walk::NoiseSpec{e, 400, 0};
        c.variants.push_back(std::move(v));
    }
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig5", "fig6"};
}

ScenarioConfig preset(const std::string& name) {
    if (name == "fig2a") return make_fig2(0.5, "fig2a");
    if (name == "fig2b") return make_fig2(1.0, "fig2b");
    if (name == "fig3") return make_fig3();
    if (name == "fig4a") return make_fig4(true, "fig4a");
    if (name == "fig4b") return make_fig4(false, "fig4b");
    if (name == "fig5") return make_fig5();
    if (name == "fig6") return make_fig6();
    throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

struct ParsedLine {
    int number = 0;
    std::string key, value;
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::invalid_argument("config parse error at line " + std::to_string(line) + ": " +
                                what);
}

std::vector<double> parse_numbers(const ParsedLine& l, std::size_t expect_min,
                                  std::size_t expect_max) {
    std::istringstream is(l.value);
    std::vector<double> out;
    double x;
    while (is >> x) out.push_back(x);
    if (!is.eof()) parse_fail(l.number, "field '" + l.key + "': malformed number");
    if (out.size() < expect_min || out.size() > expect_max)
        parse_fail(l.number, "field '" + l.key + "': expected " + std::to_string(expect_min) +
                                 (expect_max != expect_min
                                      ? ".." + std::to_string(expect_max)
                                      : "") +
                                 " numbers, got " + std::to_string(out.size()));
    return out;
}

Complex parse_complex(const ParsedLine& l) {
    auto v = parse_numbers(l, 1, 2);
    return Complex(v[0], v.size() > 1 ? v[1] : 0.0);
}

long parse_int(const ParsedLine& l) {
    auto v = parse_numbers(l, 1, 1);
    if (v[0] != std::floor(v[0])) parse_fail(l.number, "field '" + l.key + "': expected integer");
    return static_cast<long>(v[0]);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    cfg.record_every = 1;
    VariantSpec v;
    bool glauber_alpha_set = false;
    std::string state_kind, coin_init_kind = "symmetric_plus_i";
    std::map<std::string, std::vector<ParsedLine>> sections;

    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(lineno, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(lineno, "expected 'key = value'");
        if (section.empty()) parse_fail(lineno, "key outside any [section]");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        sections[section].push_back({lineno, trim(key), trim(val)});
    }

    auto section_lines = [&](const char* name) -> const std::vector<ParsedLine>& {
        static const std::vector<ParsedLine> empty;
        auto it = sections.find(name);
        return it == sections.end() ? empty : it->second;
    };

    for (const auto& l : section_lines("scenario")) {
        if (l.key == "name") cfg.name = l.value;
        else if (l.key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(l.value));
            cfg.seed_set = true;
        } else if (l.key == "record_every") cfg.record_every = static_cast<int>(parse_int(l));
        else if (l.key == "fit_window") {
            auto w = parse_numbers(l, 2, 2);
            cfg.fit_lo = static_cast<int>(w[0]);
            cfg.fit_hi = static_cast<int>(w[1]);
        } else if (l.key == "csv_min_probability") cfg.csv_min_probability = parse_numbers(l, 1, 1)[0];
        else parse_fail(l.number, "unknown [scenario] field '" + l.key + "'");
    }

    std::string kind_name;
    for (const auto& l : section_lines("algebra")) {
        if (l.key == "kind") kind_name = l.value;
        else if (l.key == "n_max") {
            if (l.value == "auto") v.auto_truncation = true;
            else v.params.n_max = static_cast<int>(parse_int(l));
        } else if (l.key == "two_S") v.params.two_S = static_cast<int>(parse_int(l));
        else if (l.key == "boson_number") v.params.boson_number = static_cast<int>(parse_int(l));
        else if (l.key == "window") v.params.window = static_cast<int>(parse_int(l));
        else if (l.key == "sector") {
            if (l.value == "even") v.params.sector = algebra::Su11Sector::Even;
            else if (l.value == "odd") v.params.sector = algebra::Su11Sector::Odd;
            else parse_fail(l.number, "sector must be even or odd");
        } else if (l.key == "guard_band") v.params.guard_band = static_cast<int>(parse_int(l));
        else if (l.key == "truncation_safety") v.truncation_safety = parse_numbers(l, 1, 1)[0];
        else parse_fail(l.number, "unknown [algebra] field '" + l.key + "'");
    }
    if (kind_name == "heisenberg_weyl") v.kind = AlgebraKind::HeisenbergWeyl;
    else if (kind_name == "su2") v.kind = AlgebraKind::Su2;
    else if (kind_name == "su3") v.kind = AlgebraKind::Su3;
    else if (kind_name == "so5") v.kind = AlgebraKind::So5;
    else if (kind_name == "euclidean2") v.kind = AlgebraKind::Euclidean2;
    else if (kind_name == "su11") v.kind = AlgebraKind::Su11;
    else if (kind_name.empty()) throw std::invalid_argument("config: missing [algebra] kind");
    else throw std::invalid_argument("config: unknown algebra kind '" + kind_name + "'");

    Complex alpha{0, 0}, sq_beta{0, 0};
    double theta = 0, phi = 0, sigma = 0;
    std::array<Complex, 3> su3b{};
    std::vector<double> label, center;
    int e2j = 0;
    for (const auto& l : section_lines("state")) {
        if (l.key == "kind") state_kind = l.value;
        else if (l.key == "alpha") { alpha = parse_complex(l); glauber_alpha_set = true; }
        else if (l.key == "theta") theta = parse_numbers(l, 1, 1)[0];
        else if (l.key == "phi") phi = parse_numbers(l, 1, 1)[0];
        else if (l.key == "beta") sq_beta = parse_complex(l);
        else if (l.key == "beta1") su3b[0] = parse_complex(l);
        else if (l.key == "beta2") su3b[1] = parse_complex(l);
        else if (l.key == "beta3") su3b[2] = parse_complex(l);
        else if (l.key == "sigma") sigma = parse_numbers(l, 1, 1)[0];
        else if (l.key == "label") label = parse_numbers(l, 1, 4);
        else if (l.key == "center") center = parse_numbers(l, 1, 4);
        else if (l.key == "j") e2j = static_cast<int>(parse_int(l));
        else parse_fail(l.number, "unknown [state] field '" + l.key + "'");
    }
    if (state_kind == "fock") v.state = states::Fock{label};
    else if (state_kind == "glauber_coherent") v.state = states::GlauberCoherent{alpha};
    else if (state_kind == "spin_coherent") v.state = states::SpinCoherent{theta, phi};
    else if (state_kind == "su3_coherent") v.state = states::Su3Coherent{su3b};
    else if (state_kind == "gaussian") v.state = states::GaussianFsl{center, sigma};
    else if (state_kind == "squeezed_vacuum") v.state = states::SqueezedVacuum{sq_beta};
    else if (state_kind == "e2_site") v.state = states::E2Site{e2j};
    else if (state_kind.empty()) throw std::invalid_argument("config: missing [state] kind");
    else throw std::invalid_argument("config: unknown state kind '" + state_kind + "'");
    (void)glauber_alpha_set;

    std::vector<double> init_amps;
    for (const auto& l : section_lines("coin")) {
        if (l.key == "kind") {
            if (l.value == "hadamard") v.coin = walk::CoinSpec::hadamard();
            else if (l.value == "grover") v.coin = walk::CoinSpec::grover();
            else parse_fail(l.number, "coin kind must be hadamard or grover");
        } else if (l.key == "init") coin_init_kind = l.value;
        else if (l.key == "init_amplitudes") init_amps = parse_numbers(l, 2, 16);
        else parse_fail(l.number, "unknown [coin] field '" + l.key + "'");
    }
    if (coin_init_kind == "symmetric_plus_i") v.coin_init = states::CoinInit::symmetric_plus_i();
    else if (coin_init_kind == "grover_symmetric")
        v.coin_init = states::CoinInit::grover_symmetric();
    else if (coin_init_kind == "custom") {
        if (init_amps.empty() || init_amps.size() % 2)
            throw std::invalid_argument("config: custom coin init needs re/im pairs");
        Eigen::VectorXcd amps(init_amps.size() / 2);
        for (Eigen::Index i = 0; i < amps.size(); ++i)
            amps[i] = Complex(init_amps[static_cast<std::size_t>(2 * i)],
                              init_amps[static_cast<std::size_t>(2 * i + 1)]);
        v.coin_init = states::CoinInit::custom_amplitudes(amps);
    } else throw std::invalid_argument("config: unknown coin init '" + coin_init_kind + "'");

    for (const auto& l : section_lines("walk")) {
        if (l.key == "beta") v.beta = parse_complex(l);
        else if (l.key == "steps") v.steps = static_cast<int>(parse_int(l));
        else if (l.key == "leakage_threshold") v.leakage_threshold = parse_numbers(l, 1, 1)[0];
        else parse_fail(l.number, "unknown [walk] field '" + l.key + "'");
    }

    if (sections.count("noise")) {
        walk::NoiseSpec n;
        for (const auto& l : section_lines("noise")) {
            if (l.key == "epsilon") n.epsilon = parse_numbers(l, 1, 1)[0];
            else if (l.key == "realizations") n.realizations = static_cast<int>(parse_int(l));
            else parse_fail(l.number, "unknown [noise] field '" + l.key + "'");
        }
        if (!cfg.seed_set)
            throw std::invalid_argument("config: [noise] requires an explicit seed");
        v.noise = n;
    }

    for (const auto& [name, lines] : sections)
        if (name != "scenario" && name != "algebra" && name != "state" && name != "coin" &&
            name != "walk" && name != "noise")
            parse_fail(lines.front().number, "unknown section [" + name + "]");

    cfg.variants.push_back(std::move(v));
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

int auto_n_max(const VariantSpec& v) {
    const auto* g = std::get_if<states::GlauberCoherent>(&v.state);
    if (!g)
        throw std::invalid_argument(
            "auto truncation needs a Glauber coherent initial state");
    double a = std::abs(g->alpha);
    double base = std::ceil(std::pow(std::sqrt(2.0) * a +
                                         v.truncation_safety * v.steps * std::abs(v.beta),
                                     2.0) /
                            2.0);
    double guard = std::max(64.0, std::ceil(6.0 * std::sqrt(base)));
    return static_cast<int>(base + guard);
}

std::int64_t estimated_sites(const VariantSpec& v, int resolved_n_max) {
    switch (v.kind) {
        case AlgebraKind::HeisenbergWeyl: return resolved_n_max + 1;
        case AlgebraKind::Su2: return v.params.two_S + 1;
        case AlgebraKind::Su3: {
            std::int64_t n = v.params.boson_number;
            return (n + 1) * (n + 2) / 2;
        }
        case AlgebraKind::So5: {
            std::int64_t n = v.params.boson_number;
            return (n + 1) * (n + 2) * (n + 3) / 6;
        }
        case AlgebraKind::Euclidean2: return 2LL * v.params.window + 1;
        case AlgebraKind::Su11: return resolved_n_max / 2 + 1;
    }
    return 0;
}

double estimated_generator_norm(const VariantSpec& v, std::int64_t sites, int n_max) {
    double b = std::abs(v.beta);
    switch (v.kind) {
        case AlgebraKind::HeisenbergWeyl: return 2.0 * b * std::sqrt(double(n_max));
        case AlgebraKind::Su2: {
            double S = v.params.two_S / 2.0;
            return 2.0 * b * std::sqrt(S * (S + 1.0));
        }
        case AlgebraKind::Su3:
        case AlgebraKind::So5: return 2.0 * b * (v.params.boson_number / 2.0 + 1.0);
        case AlgebraKind::Euclidean2: return 2.0 * b;
        case AlgebraKind::Su11: return b * (double(n_max) + 2.0);
        default: return 2.0 * b * std::sqrt(double(sites));
    }
}

int coin_dim_of(AlgebraKind k) {
    switch (k) {
        case AlgebraKind::Su3: return 6;
        case AlgebraKind::So5: return 8;
        default: return 2;
    }
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& config) {
    ValidationReport rep;
    for (const auto& v : config.variants) {
        VariantEstimate e;
        e.label = v.label;
        try {
            int n_max = v.params.n_max;
            if (v.kind == AlgebraKind::HeisenbergWeyl && v.auto_truncation) {
                n_max = auto_n_max(v);
                e.suggested_n_max = n_max;
                e.notes.push_back("auto truncation: n_max = " + std::to_string(n_max));
            }
            e.coin_dim = coin_dim_of(v.kind);
            e.site_count = estimated_sites(v, n_max);
            e.total_dimension = e.site_count * e.coin_dim;
            if (e.site_count > v.params.max_sites) {
                rep.ok = false;
                rep.errors.push_back("variant '" + v.label + "': site count " +
                                     std::to_string(e.site_count) + " exceeds limit");
            }
            e.est_generator_norm = estimated_generator_norm(v, e.site_count, n_max);
            numerics::ExpmOptions opts;
            opts.anti_hermitian = true;
            double apps = numerics::expm_planned_applications(e.est_generator_norm, opts);
            double nnz = 2.0 * double(e.site_count);
            double flops = apps * nnz * 8.0 * e.coin_dim * std::max(v.steps, 1);
            if (v.noise && v.noise->epsilon > 0.0) flops *= v.noise->realizations;
            e.est_seconds = flops / 2e9;
            if (v.beta == Complex(0.0, 0.0))
                e.notes.push_back("beta = 0: walk reduces to coin tosses");
            if (v.steps == 0) e.notes.push_back("steps = 0: initial snapshot only");
        } catch (const std::exception& ex) {
            rep.ok = false;
            rep.errors.push_back("variant '" + v.label + "': " + ex.what());
        }
        rep.variants.push_back(std::move(e));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Execution & output
// ---------------------------------------------------------------------------

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string csv_of_snapshots(const std::vector<walk::Snapshot>& snaps,
                             const algebra::AlgebraRep& rep, const std::string& hash,
                             double min_p) {
    std::ostringstream os;
    os << "# fslwalk " << kVersion << " config=" << hash << "\n";
    std::size_t comps = rep.site_labels.empty() ? 0 : rep.site_labels.front().size();
    os << "step";
    for (std::size_t c = 0; c < comps; ++c) os << ",label" << c;
    os << ",probability,sqrt_probability\n";
    for (const auto& snap : snaps) {
        for (Eigen::Index s = 0; s < rep.site_count; ++s) {
            double p = snap.dist.p[static_cast<std::size_t>(s)];
            if (p < min_p) continue;
            os << snap.m;
            for (double x : rep.site_labels[static_cast<std::size_t>(s)]) os << ',' << fmt17(x);
            os << ',' << fmt17(p) << ',' << fmt17(std::sqrt(p)) << "\n";
        }
    }
    return os.str();
}

json fit_json(const std::optional<observables::PowerLawFit>& fit) {
    if (!fit) return nullptr;
    return json{{"exponent", fit->exponent},
                {"log_prefactor", fit->prefactor_log},
                {"r_squared", fit->r_squared}};
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    namespace fs = std::filesystem;
    RunResult result;
    result.config_hash = config_hash(config);
    result.seed = config.seed;
    fs::create_directories(options.out_dir);

    json summary;
    summary["version"] = kVersion;
    summary["config_hash"] = result.config_hash;
    summary["name"] = config.name;
    summary["seed"] = config.seed;
    summary["record_every"] = config.record_every;
    summary["variants"] = json::array();

    json meta;
    meta["version"] = kVersion;
    meta["config_hash"] = result.config_hash;
    meta["name"] = config.name;
    meta["seed"] = config.seed;
    meta["variants"] = json::array();

    for (const auto& v : config.variants) {
        auto t0 = std::chrono::steady_clock::now();
        VariantResult vr;
        vr.label = v.label;
        vr.kind = v.kind;

        algebra::AlgebraParams params = v.params;
        if (v.kind == AlgebraKind::HeisenbergWeyl && v.auto_truncation)
            params.n_max = auto_n_max(v);
        vr.resolved_n_max = params.n_max;
        algebra::AlgebraRep rep = algebra::build_algebra(v.kind, params);
        vr.site_count = rep.site_count;
        vr.coin_dim = rep.coin_dim;

        numerics::ComplexVector walker = states::make_state(rep, v.state);
        numerics::ComplexVector state =
            states::compose(walker, states::coin_init_vector(v.coin_init, rep.coin_dim));

        walk::WalkConfig wc;
        wc.beta = v.beta;
        wc.steps = v.steps;
        wc.coin = v.coin;
        wc.coin_init = v.coin_init;
        wc.leakage_threshold = v.leakage_threshold;

        json vj;
        vj["label"] = v.label;
        vj["algebra"] = algebra::kind_name(v.kind);
        vj["site_count"] = static_cast<std::int64_t>(rep.site_count);
        vj["coin_dim"] = rep.coin_dim;
        if (rep.truncated()) vj["n_max"] = params.n_max;
        vj["beta"] = {v.beta.real(), v.beta.imag()};
        vj["steps"] = v.steps;

        const std::vector<walk::Snapshot>* snaps = nullptr;
        std::vector<double> fit_ms, fit_sigmas;
        int fit_hi = config.fit_hi > 0 ? std::min(config.fit_hi, v.steps) : v.steps;

        if (v.noise) {
            walk::NoiseSpec noise = *v.noise;
            noise.master_seed = config.seed;
            walk::NoisyResult nr =
                walk::evolve_noisy(state, rep, wc, noise, config.record_every, options.threads);
            vj["ensemble"] = {{"epsilon", noise.epsilon},
                              {"realizations", noise.realizations}};
            json steps_json = json::array();
            for (std::size_t m = 0; m < nr.sigma.size(); ++m) {
                steps_json.push_back({{"m", m}, {"mean", nr.mean[m]}, {"sigma", nr.sigma[m]}});
                if (static_cast<int>(m) >= config.fit_lo && static_cast<int>(m) <= fit_hi &&
                    nr.sigma[m] > 0.0) {
                    fit_ms.push_back(double(m));
                    fit_sigmas.push_back(nr.sigma[m]);
                }
            }
            vj["per_step"] = std::move(steps_json);
            vr.noisy = std::move(nr);
            snaps = &vr.noisy->snapshots;
            vr.final_leakage = vr.noisy->snapshots.back().dist.leakage;
        } else {
            walk::Trajectory traj = walk::evolve(state, rep, wc, config.record_every);
            json steps_json = json::array();
            for (const auto& r : traj.per_step) {
                steps_json.push_back({{"m", r.m},
                                      {"norm", r.norm},
                                      {"mean", r.mean},
                                      {"sigma", r.sigma},
                                      {"entropy_bits", r.entropy_bits},
                                      {"leakage", r.leakage}});
                if (r.m >= config.fit_lo && r.m <= fit_hi && r.sigma > 0.0) {
                    fit_ms.push_back(double(r.m));
                    fit_sigmas.push_back(r.sigma);
                }
            }
            vj["per_step"] = std::move(steps_json);
            vr.trajectory = std::move(traj);
            snaps = &vr.trajectory->snapshots;
            vr.final_leakage = vr.trajectory->per_step.back().leakage;
        }

        if (fit_ms.size() >= 3)
            vr.sigma_fit = observables::power_law_fit(fit_ms, fit_sigmas);
        vj["sigma_fit"] = fit_json(vr.sigma_fit);
        vj["fit_window"] = {config.fit_lo, fit_hi};
        vj["final_leakage"] = vr.final_leakage;
        json snap_json = json::array();
        for (const auto& s : *snaps) snap_json.push_back(s.m);
        vj["snapshots"] = std::move(snap_json);

        fs::path vdir = options.out_dir;
        if (!v.label.empty()) {
            vdir /= v.label;
            fs::create_directories(vdir);
        }
        atomic_write(vdir / "distribution.csv",
                     csv_of_snapshots(*snaps, rep, result.config_hash,
                                      config.csv_min_probability));
        if (options.plot) {
            std::string comment = "fslwalk " + std::string(kVersion) +
                                  " config=" + result.config_hash;
            std::string art =
                rep.rank == 1
                    ? svg::render_line_plot(*snaps, config.name + " " + v.label, comment)
                    : svg::render_heat_map(snaps->back().dist, config.name + " " + v.label,
                                           comment);
            atomic_write(vdir / "distribution.svg", art);
        }

        auto t1 = std::chrono::steady_clock::now();
        vr.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        if (!options.quiet)
            std::cout << "variant " << (v.label.empty() ? "(default)" : v.label) << ": dim "
                      << rep.site_count << "x" << rep.coin_dim << ", " << vr.wall_seconds
                      << " s\n";

        meta["variants"].push_back({{"label", v.label},
                                    {"algebra", algebra::kind_name(v.kind)},
                                    {"site_count", static_cast<std::int64_t>(rep.site_count)},
                                    {"coin_dim", rep.coin_dim},
                                    {"n_max", rep.truncated() ? json(params.n_max) : json()},
                                    {"final_leakage", vr.final_leakage}});
        summary["variants"].push_back(std::move(vj));
        result.variants.push_back(std::move(vr));
    }

    atomic_write(options.out_dir / "summary.json", summary.dump(2) + "\n");
    atomic_write(options.out_dir / "meta.json", meta.dump(2) + "\n");
    return result;
}

}  // namespace fsl::scenario
