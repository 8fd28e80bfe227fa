#include "shrinkerlab/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace shrinkerlab {

using nlohmann::json;

void SolverConfig::validate() const {
    parse_spacing(spacing);
    if (nr < 16 || ntheta < 8) throw std::invalid_argument("grid too coarse");
    if (N < 5) throw std::invalid_argument("symmetry order must be at least 5");
    for (const auto& [k, a] : boundary) {
        if (k < 1 || k % 2 == 0) throw std::invalid_argument("boundary keys must be odd k >= 1");
        (void)a;
    }
    if (eps_fraction < 0) throw std::invalid_argument("eps_fraction must be nonnegative");
    if (eps_scale < 0) throw std::invalid_argument("eps_scale must be nonnegative");
    if (c_cfl <= 0 || c_cfl > 1) throw std::invalid_argument("c_cfl must lie in (0, 1]");
    if (tol_steady <= 0 || tau_max <= 0) throw std::invalid_argument("bad stopping parameters");
    if (R0 > 0 && R0 > R) throw std::invalid_argument("need R0 <= R");
}

BoundaryData SolverConfig::shape(double amplitude) const {
    std::map<int, double> c = boundary;
    for (auto& [k, a] : c) a *= amplitude;
    return BoundaryData(N, std::move(c));
}

std::string SolverConfig::to_json_text() const {
    json j;
    j["R"] = R;
    j["R_max"] = R_max;
    j["nr"] = nr;
    j["ntheta"] = ntheta;
    j["N"] = N;
    j["spacing"] = spacing;
    json jb = json::object();
    for (const auto& [k, a] : boundary) jb[std::to_string(k)] = a;
    j["boundary"] = jb;
    j["eps_scale"] = eps_scale;
    j["eps_fraction"] = eps_fraction;
    j["R0"] = R0;
    j["c_cfl"] = c_cfl;
    j["tol_steady"] = tol_steady;
    j["tau_max"] = tau_max;
    j["snapshot_every"] = snapshot_every;
    j["output_dir"] = output_dir;
    j["barriers_on"] = barriers_on;
    j["force"] = force;
    j["jobs"] = jobs;
    j["checks"] = checks;
    j["seed"] = seed;
    return j.dump(2);
}

SolverConfig SolverConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    SolverConfig c;
    c.R = j.value("R", c.R);
    c.R_max = j.value("R_max", c.R_max);
    c.nr = j.value("nr", c.nr);
    c.ntheta = j.value("ntheta", c.ntheta);
    c.N = j.value("N", c.N);
    c.spacing = j.value("spacing", c.spacing);
    if (j.contains("boundary")) {
        c.boundary.clear();
        for (auto it = j["boundary"].begin(); it != j["boundary"].end(); ++it)
            c.boundary[std::stoi(it.key())] = it.value().get<double>();
    }
    c.eps_scale = j.value("eps_scale", c.eps_scale);
    c.eps_fraction = j.value("eps_fraction", c.eps_fraction);
    c.R0 = j.value("R0", c.R0);
    c.c_cfl = j.value("c_cfl", c.c_cfl);
    c.tol_steady = j.value("tol_steady", c.tol_steady);
    c.tau_max = j.value("tau_max", c.tau_max);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.barriers_on = j.value("barriers_on", c.barriers_on);
    c.force = j.value("force", c.force);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("checks")) c.checks = j["checks"].get<std::vector<std::string>>();
    c.seed = j.value("seed", c.seed);
    return c;
}

SolverConfig SolverConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

void SolverConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file " + path);
    out << to_json_text() << "\n";
}

}  // namespace shrinkerlab
