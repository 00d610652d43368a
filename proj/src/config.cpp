#include "cqed/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "cqed/csv.hpp"

namespace cqed {

namespace {

constexpr double pi = std::numbers::pi;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    std::string out(s.substr(first, last - first + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        parts.push_back(trim(item));
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

class Field {
public:
    Field(std::string key, std::string value, std::string where)
        : key_(std::move(key)), value_(std::move(value)), where_(std::move(where))
    {
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ValidationError(key_ + ": " + what + " (got '" + value_ + "', " + where_ + ")");
    }

    double number(const std::string& text) const
    {
        double v = 0.0;
        const auto* begin = text.data();
        const auto* end = begin + text.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
            fail("expected a finite number");
        }
        return v;
    }
    double number() const { return number(value_); }

    long integer(const std::string& text) const
    {
        long v = 0;
        const auto* begin = text.data();
        const auto* end = begin + text.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (text.empty() || ec != std::errc() || ptr != end) {
            fail("expected an integer");
        }
        return v;
    }
    int integer() const { return static_cast<int>(integer(value_)); }

    bool boolean() const
    {
        if (value_ == "true" || value_ == "1") {
            return true;
        }
        if (value_ == "false" || value_ == "0") {
            return false;
        }
        fail("expected true or false");
    }

    std::vector<double> numbers() const
    {
        std::vector<double> out;
        if (value_.empty()) {
            return out;
        }
        for (const auto& item : split(value_, ',')) {
            out.push_back(number(item));
        }
        return out;
    }

    // "a:b, c:d"
    std::vector<std::pair<std::string, std::string>> pairs() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        if (value_.empty()) {
            return out;
        }
        for (const auto& item : split(value_, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) {
                fail("expected a comma-separated list of a:b pairs");
            }
            out.emplace_back(parts[0], parts[1]);
        }
        return out;
    }

    const std::string& text() const { return value_; }

private:
    std::string key_;
    std::string value_;
    std::string where_;
};

template <typename Enum>
Enum choice(const Field& f, std::initializer_list<std::pair<const char*, Enum>> options)
{
    std::string names;
    for (const auto& [name, value] : options) {
        if (f.text() == name) {
            return value;
        }
        names += names.empty() ? name : std::string("|") + name;
    }
    f.fail("expected one of " + names);
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items) {
        out += out.empty() ? s : ", " + s;
    }
    return out;
}

std::string join_numbers(const std::vector<double>& values)
{
    std::vector<std::string> items;
    for (double v : values) {
        items.push_back(format_number(v));
    }
    return join(items);
}

const char* mode_name(RamseyMode mode)
{
    return mode == RamseyMode::full_dynamics ? "full" : "ideal";
}

const char* gauge_name(DriveGauge gauge)
{
    return gauge == DriveGauge::plus_locked ? "plus_locked" : "symmetric";
}

const char* cavity_name(CavityKind kind)
{
    switch (kind) {
    case CavityKind::vacuum:
        return "vacuum";
    case CavityKind::fock:
        return "fock";
    case CavityKind::coherent:
        return "coherent";
    }
    return "vacuum";
}

} // namespace

RunConfig parse_config(std::istream& in, const std::string& source)
{
    RunConfig c;
    std::set<std::string> seen;
    bool gamma_given = false;
    bool gamma_pi_given = false;
    std::optional<double> g_plus, g_minus;
    double alpha_re = 0.0, alpha_im = 0.0;
    int fock_n = 0;
    std::string cavity = "vacuum";

    using Setter = std::function<void(const Field&)>;
    const std::map<std::string, Setter> setters{
        {"g_khz", [&](const Field& f) { c.g_khz = f.number(); }},
        {"g_plus_khz", [&](const Field& f) { g_plus = f.number(); }},
        {"g_minus_khz", [&](const Field& f) { g_minus = f.number(); }},
        {"omega_khz", [&](const Field& f) { c.omega_khz = f.number(); }},
        {"delta_ratio", [&](const Field& f) { c.delta_ratio = f.number(); }},
        {"nmax_plus", [&](const Field& f) { c.nmax_plus = f.integer(); }},
        {"nmax_minus", [&](const Field& f) { c.nmax_minus = f.integer(); }},
        {"tail_tol", [&](const Field& f) { c.tail_tol = f.number(); }},
        {"gamma", [&](const Field& f) { c.gamma = f.number(); gamma_given = true; }},
        {"gamma_pi", [&](const Field& f) { c.gamma = pi * f.number(); gamma_pi_given = true; }},
        {"path",
         [&](const Field& f) {
             c.path_knots.clear();
             for (const auto& [theta, phi] : f.pairs()) {
                 c.path_knots.push_back({f.number(theta), f.number(phi)});
             }
         }},
        {"path_weights", [&](const Field& f) { c.path_weights = f.numbers(); }},
        {"leg_fractions",
         [&](const Field& f) {
             const auto v = f.numbers();
             if (v.size() != 3) {
                 f.fail("expected three comma-separated fractions");
             }
             c.leg_fractions = {v[0], v[1], v[2]};
         }},
        {"loop_time_ms", [&](const Field& f) { c.loop_time_ms = f.number(); }},
        {"rabi_rounding", [&](const Field& f) { c.rabi_rounding = f.boolean(); }},
        {"samples_per_leg", [&](const Field& f) { c.samples_per_leg = f.integer(); }},
        {"gauge",
         [&](const Field& f) {
             c.gauge = choice<DriveGauge>(
                 f, {{"plus_locked", DriveGauge::plus_locked}, {"symmetric", DriveGauge::symmetric}});
         }},
        {"cavity",
         [&](const Field& f) {
             choice<CavityKind>(f, {{"vacuum", CavityKind::vacuum},
                                    {"fock", CavityKind::fock},
                                    {"coherent", CavityKind::coherent}});
             cavity = f.text();
         }},
        {"fock_n", [&](const Field& f) { fock_n = f.integer(); }},
        {"alpha_re", [&](const Field& f) { alpha_re = f.number(); }},
        {"alpha_im", [&](const Field& f) { alpha_im = f.number(); }},
        {"xi_points", [&](const Field& f) { c.xi_points = f.integer(); }},
        {"mode",
         [&](const Field& f) {
             c.mode = choice<RamseyMode>(
                 f, {{"full", RamseyMode::full_dynamics}, {"ideal", RamseyMode::ideal_phase}});
         }},
        {"steps", [&](const Field& f) { c.steps = f.integer(); }},
        {"alphas", [&](const Field& f) { c.alphas = f.numbers(); }},
        {"alpha_phase", [&](const Field& f) { c.alpha_phase = f.number(); }},
        {"time_ladder_ms", [&](const Field& f) { c.time_ladder_ms = f.numbers(); }},
        {"dressed",
         [&](const Field& f) {
             c.dressed.clear();
             for (const auto& [n, m] : f.pairs()) {
                 c.dressed.push_back({static_cast<int>(f.integer(n)), static_cast<int>(f.integer(m))});
             }
         }},
        {"gamma_list", [&](const Field& f) { c.gamma_list = f.numbers(); }},
        {"transport_time_ms", [&](const Field& f) { c.transport_time_ms = f.number(); }},
        {"transport_steps", [&](const Field& f) { c.transport_steps = f.integer(); }},
        {"seed",
         [&](const Field& f) {
             const long v = f.integer(f.text());
             if (v < 0) {
                 f.fail("must be non-negative");
             }
             c.seed = static_cast<unsigned long>(v);
         }},
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("expected 'key = value' at " + where);
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ValidationError(key + ": unknown key at " + where);
        }
        if (!seen.insert(key).second) {
            throw ValidationError(key + ": given twice (" + where + ")");
        }
        it->second(Field(key, value, where));
    }

    if (gamma_given && gamma_pi_given) {
        throw ValidationError("gamma: give either gamma or gamma_pi, not both");
    }
    if ((gamma_given || gamma_pi_given) && !c.path_knots.empty()) {
        throw ValidationError("path: an explicit path fixes the solid angle; drop gamma/gamma_pi");
    }
    if (g_plus || g_minus) {
        if (seen.count("g_khz")) {
            throw ValidationError("g_khz: give either g_khz or g_plus_khz/g_minus_khz");
        }
        const double gp = g_plus.value_or(c.g_khz);
        const double gm = g_minus.value_or(c.g_khz);
        if (gp != gm) {
            throw ValidationError("g_minus_khz: the model uses one vacuum coupling for both modes "
                                  "(g_plus_khz = " + format_number(gp) + ", g_minus_khz = "
                                  + format_number(gm) + ")");
        }
        c.g_khz = gp;
    }

    if (cavity == "fock") {
        c.cavity = CavitySpec::fock(fock_n);
    } else if (cavity == "coherent") {
        c.cavity = CavitySpec::coherent(Complex(alpha_re, alpha_im), c.tail_tol);
    } else {
        if (seen.count("fock_n") || seen.count("alpha_re") || seen.count("alpha_im")) {
            throw ValidationError("cavity: fock_n/alpha_re/alpha_im given but cavity = vacuum");
        }
        c.cavity = CavitySpec::vacuum();
    }
    c.cavity.tail_tol = c.tail_tol;
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config: cannot open '" + path + "'");
    }
    return parse_config(in, path);
}

ModelParams model_params(const RunConfig& config)
{
    if (!(config.g_khz >= 0.0) || !(config.omega_khz > 0.0)) {
        throw ValidationError("g_khz/omega_khz: couplings must be positive");
    }
    if (!(config.delta_ratio > 0.0)) {
        throw ValidationError("delta_ratio: detuning must be positive");
    }
    return params_from_khz(config.g_khz, config.omega_khz, config.delta_ratio);
}

SpaceConfig space_config(const RunConfig& config)
{
    if (config.nmax_plus < 0 || config.nmax_minus < 0) {
        throw ValidationError("nmax_plus/nmax_minus: photon cutoffs must be non-negative");
    }
    return make_space(config.nmax_plus, config.nmax_minus);
}

PathSpec loop_path(const RunConfig& config)
{
    if (!(config.loop_time_ms > 0.0)) {
        throw ValidationError("loop_time_ms: must be positive");
    }
    if (config.path_knots.empty()) {
        if (!(config.gamma >= 0.0 && config.gamma < 4.0 * pi)) {
            throw ValidationError("gamma: lasso solid angle must lie in [0, 4pi)");
        }
        for (double f : config.leg_fractions) {
            if (!(f > 0.0)) {
                throw ValidationError("leg_fractions: must be positive");
            }
        }
        return lasso_path(config.gamma, config.loop_time_ms, config.leg_fractions);
    }
    if (config.path_knots.size() < 2) {
        throw ValidationError("path: needs at least two knots");
    }
    for (const auto& k : config.path_knots) {
        if (!(k.theta >= 0.0 && k.theta <= pi)) {
            throw ValidationError("path: theta must lie in [0, pi]");
        }
    }
    std::vector<double> weights = config.path_weights;
    if (weights.empty()) {
        weights.assign(config.path_knots.size() - 1, 1.0);
    }
    if (weights.size() != config.path_knots.size() - 1) {
        throw ValidationError("path_weights: need one weight per leg ("
                              + std::to_string(config.path_knots.size() - 1) + ")");
    }
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw ValidationError("path_weights: must be positive");
        }
    }
    const auto path = with_total_time(piecewise_path(config.path_knots, weights), config.loop_time_ms);
    if (!is_closed(path)) {
        throw ClosureError("path: first and last knots are different points on the sphere");
    }
    return path;
}

RamseyConfig ramsey_config(const RunConfig& config)
{
    RamseyConfig r;
    r.space = space_config(config);
    r.params = model_params(config);
    r.cavity = config.cavity;
    r.cavity.tail_tol = config.tail_tol;
    r.loop = loop_path(config);
    r.tau = config.loop_time_ms;
    r.round_to_rabi_cycles = config.rabi_rounding;
    if (config.xi_points < min_xi_samples) {
        throw ValidationError("xi_points: the fringe fit needs at least " + std::to_string(min_xi_samples));
    }
    r.xi_grid = uniform_xi_grid(config.xi_points);
    r.mode = config.mode;
    r.scheme = PhaseScheme::reference_arm;
    r.gauge = config.gauge;
    if (config.samples_per_leg < 2) {
        throw ValidationError("samples_per_leg: must be at least 2");
    }
    r.samples_per_leg = config.samples_per_leg;
    if (config.steps < 1) {
        throw ValidationError("steps: must be positive");
    }
    r.steps = config.steps;
    return r;
}

std::vector<double> transport_gammas(const RunConfig& config)
{
    if (!config.gamma_list.empty()) {
        return config.gamma_list;
    }
    return {solid_angle(loop_path(config))};
}

void validate(const RunConfig& config, Task task)
{
    auto wants = [task](Task t) { return task == Task::all || task == t; };
    if (!(config.tail_tol > 0.0 && config.tail_tol < 1.0)) {
        throw ValidationError("tail_tol: must lie in (0, 1)");
    }
    const auto r = ramsey_config(config);
    validate(r);
    for (double a : wants(Task::alpha_sweep) ? config.alphas : std::vector<double>{}) {
        if (a < 0.0) {
            throw ValidationError("alphas: magnitudes must be non-negative");
        }
        const double tail = coherent_tail(std::polar(a, config.alpha_phase), config.nmax_plus);
        if (tail >= config.tail_tol) {
            throw TruncationError("alphas: alpha = " + format_number(a) + " loses "
                                  + format_number(tail) + " of its probability above nmax_plus = "
                                  + std::to_string(config.nmax_plus) + " (tail_tol "
                                  + format_number(config.tail_tol) + ")");
        }
    }
    for (double t : wants(Task::adiabaticity) ? config.time_ladder_ms : std::vector<double>{}) {
        if (!(t > 0.0)) {
            throw ValidationError("time_ladder_ms: loop times must be positive");
        }
    }
    for (const auto& d : wants(Task::dressed_phases) ? config.dressed : std::vector<DressedLabel>{}) {
        const int k = d.n + d.m + 1;
        if (d.n < 0 || d.m < 0) {
            throw ValidationError("dressed: photon numbers must be non-negative");
        }
        if (k > std::min(config.nmax_plus, config.nmax_minus)) {
            throw ValidationError("dressed: doublet " + std::to_string(d.n) + ":" + std::to_string(d.m)
                                  + " lies in excitation sector " + std::to_string(k)
                                  + ", which needs nmax_plus and nmax_minus >= " + std::to_string(k));
        }
    }
    for (double g : config.gamma_list) {
        if (!(g >= 0.0 && g < 4.0 * pi)) {
            throw ValidationError("gamma_list: solid angles must lie in [0, 4pi)");
        }
    }
    if (!(config.transport_time_ms > 0.0)) {
        throw ValidationError("transport_time_ms: must be positive");
    }
    if (config.transport_steps < 1) {
        throw ValidationError("transport_steps: must be positive");
    }
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c)
{
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](std::string key, std::string value) { out.emplace_back(std::move(key), std::move(value)); };
    auto num = [](double v) { return format_number(v); };

    add("g_khz", num(c.g_khz));
    add("omega_khz", num(c.omega_khz));
    add("delta_ratio", num(c.delta_ratio));
    add("nmax_plus", std::to_string(c.nmax_plus));
    add("nmax_minus", std::to_string(c.nmax_minus));
    add("tail_tol", num(c.tail_tol));
    if (c.path_knots.empty()) {
        add("gamma", num(c.gamma));
        add("leg_fractions", join_numbers({c.leg_fractions.begin(), c.leg_fractions.end()}));
    } else {
        std::vector<std::string> knots;
        for (const auto& k : c.path_knots) {
            knots.push_back(num(k.theta) + ":" + num(k.phi));
        }
        add("path", join(knots));
        add("path_weights", join_numbers(c.path_weights));
    }
    add("loop_time_ms", num(c.loop_time_ms));
    add("rabi_rounding", c.rabi_rounding ? "true" : "false");
    add("samples_per_leg", std::to_string(c.samples_per_leg));
    add("gauge", gauge_name(c.gauge));
    add("cavity", cavity_name(c.cavity.kind));
    if (c.cavity.kind == CavityKind::fock) {
        add("fock_n", std::to_string(c.cavity.photons));
    }
    if (c.cavity.kind == CavityKind::coherent) {
        add("alpha_re", num(c.cavity.alpha.real()));
        add("alpha_im", num(c.cavity.alpha.imag()));
    }
    add("xi_points", std::to_string(c.xi_points));
    add("mode", mode_name(c.mode));
    add("steps", std::to_string(c.steps));
    add("alphas", join_numbers(c.alphas));
    add("alpha_phase", num(c.alpha_phase));
    add("time_ladder_ms", join_numbers(c.time_ladder_ms));
    std::vector<std::string> dressed;
    for (const auto& d : c.dressed) {
        dressed.push_back(std::to_string(d.n) + ":" + std::to_string(d.m));
    }
    add("dressed", join(dressed));
    add("gamma_list", join_numbers(c.gamma_list));
    add("transport_time_ms", num(c.transport_time_ms));
    add("transport_steps", std::to_string(c.transport_steps));
    add("seed", std::to_string(c.seed));
    return out;
}

void write_header(std::ostream& out, const RunConfig& config, const std::string& subcommand)
{
    write_comment(out, "version", artifact_version);
    write_comment(out, "subcommand", subcommand);
    for (const auto& [key, value] : describe(config)) {
        write_comment(out, key, value);
    }
    const auto p = model_params(config);
    constexpr double two_pi = 2.0 * pi;
    write_comment(out, "units", "frequencies entered in kHz, used as rad/ms (x 2pi); times in ms");
    write_comment(out, "g_rad_per_ms", format_number(p.g));
    write_comment(out, "omega_rad_per_ms", format_number(p.omega_drive));
    write_comment(out, "delta_rad_per_ms", format_number(p.delta));
    write_comment(out, "lambda_khz", format_number(p.lambda() / two_pi)
                                         + " (exact g*Omega/delta)");
}

} // namespace cqed
