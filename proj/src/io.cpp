#include "shrinkerlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace shrinkerlab {

using nlohmann::json;

std::string format_g17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_field_csv(const std::string& path, const Field& u) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "r,theta,u\n";
    const auto& r = u.grid->r();
    const auto& th = u.grid->theta();
    for (int i = 0; i < u.nr(); ++i)
        for (int j = 0; j < u.ntheta(); ++j)
            out << format_g17(r[i]) << ',' << format_g17(th[j]) << ',' << format_g17(u.v(i, j))
                << '\n';
}

Field read_field_csv(const std::string& path, GridPtr grid, bool symmetric_tag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line != "r,theta,u") throw std::runtime_error("bad field snapshot header in " + path);
    Field u(std::move(grid), symmetric_tag);
    for (int i = 0; i < u.nr(); ++i)
        for (int j = 0; j < u.ntheta(); ++j) {
            if (!std::getline(in, line)) throw std::runtime_error("truncated snapshot " + path);
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            u.v(i, j) = std::stod(line.substr(c2 + 1));
        }
    return u;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& history,
                           long stride) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "tau,J,dissipation,residual_inf,grad_max,grad_argmax_radius,barrier_violation,"
           "cone_sup,symmetry_dev\n";
    const long n = long(history.size());
    for (long i = 0; i < n; ++i) {
        if (stride > 1 && i % stride != 0 && i != n - 1) continue;
        const auto& d = history[i];
        out << format_g17(d.tau) << ',' << format_g17(double(d.J)) << ','
            << format_g17(d.dissipation) << ',' << format_g17(d.residual_inf) << ','
            << format_g17(d.grad_max) << ',' << format_g17(d.grad_argmax_radius) << ','
            << format_g17(d.barrier_violation) << ',' << format_g17(d.cone_sup) << ','
            << format_g17(d.symmetry_dev) << '\n';
    }
}

std::string barrier_certificate_json(const BarrierSet& bs, const BarrierResiduals& res) {
    json j;
    j["eps"] = bs.params.eps;
    j["eps_max"] = bs.params.eps_max;
    j["k"] = bs.params.k;
    j["K1"] = bs.params.K1;
    j["K2"] = bs.params.K2;
    j["A"] = bs.params.A;
    j["maxEplus"] = res.max_E_plus;
    j["minEminus"] = res.min_E_minus;
    j["pass"] = res.pass;
    return j.dump(2);
}

void write_barrier_certificate(const std::string& path, const BarrierSet& bs,
                               const BarrierResiduals& res) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << barrier_certificate_json(bs, res) << "\n";
}

std::string report_json(const VerificationReport& report) {
    json j;
    j["provenance"] = report.provenance;
    j["all_pass"] = report.all_pass();
    json arr = json::array();
    for (const auto& e : report.entries) {
        json je;
        je["name"] = e.name;
        je["value"] = e.value;
        je["threshold"] = e.threshold;
        je["pass"] = e.pass;
        je["vacuous"] = e.vacuous;
        if (!e.note.empty()) je["note"] = e.note;
        arr.push_back(je);
    }
    j["checks"] = arr;
    return j.dump(2);
}

void write_report(const std::string& path, const VerificationReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report_json(report) << "\n";
}

}  // namespace shrinkerlab
