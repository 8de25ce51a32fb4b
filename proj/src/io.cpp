#include "mfp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfp::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_value_csv(const std::string& path, const TimeGrid& grid, const ValuePath& V) {
    auto out = open_out(path);
    out << "t,k,V,delta_V\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 1; k <= V.values.rows(); ++k)
            out << format_g17(grid.points[i]) << ',' << k << ',' << format_g17(V.v(k, i)) << ','
                << format_g17(V.delta(k, i)) << '\n';
}

void write_distribution_csv(const std::string& path, const TimeGrid& grid,
                            const DistributionPath& m) {
    auto out = open_out(path);
    out << "t,k,m,cdf\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double cdf = 0.0;
        for (std::size_t k = 0; k < m.values.rows(); ++k) {
            cdf += m.values(k, i);
            out << format_g17(grid.points[i]) << ',' << k << ',' << format_g17(m.values(k, i))
                << ',' << format_g17(cdf) << '\n';
        }
    }
}

void write_policy_csv(const std::string& path, const TimeGrid& grid, const PolicyPath& policy) {
    auto out = open_out(path);
    out << "t,k,p_star,lambda_star\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 1; k <= policy.prices.rows(); ++k)
            out << format_g17(grid.points[i]) << ',' << k << ','
                << format_g17(policy.price(k, i)) << ',' << format_g17(policy.intensity(k, i))
                << '\n';
}

void write_market_csv(const std::string& path, const TimeGrid& grid, const MeanPricePath& p_bar,
                      const DistributionPath& m) {
    auto out = open_out(path);
    out << "t,p_bar,eta\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << format_g17(grid.points[i]) << ',' << format_g17(p_bar.values[i]) << ','
            << format_g17(m.eta(i)) << '\n';
}

void write_trace_csv(const std::string& path, const IterationTrace& trace) {
    auto out = open_out(path);
    out << "iter,L_error\n";
    for (std::size_t j = 0; j < trace.errors.size(); ++j)
        out << (j + 1) << ',' << format_g17(trace.errors[j]) << '\n';
}

void write_stability_csv(const std::string& path, double cv_V, double cv_pbar, double cv_m) {
    auto out = open_out(path);
    out << "quantity,cv\n";
    out << "V," << format_g17(cv_V) << '\n';
    out << "p_bar," << format_g17(cv_pbar) << '\n';
    out << "m," << format_g17(cv_m) << '\n';
}

void write_montecarlo_csv(const std::string& path, const TimeGrid& grid,
                          const DistributionPath& ode, const DistributionPath& empirical) {
    auto out = open_out(path);
    out << "t,k,m_ode,m_empirical,abs_dev\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 0; k < ode.values.rows(); ++k) {
            const double a = ode.values(k, i);
            const double b = empirical.values(k, i);
            const double dev = a >= b ? a - b : b - a;
            out << format_g17(grid.points[i]) << ',' << k << ',' << format_g17(a) << ','
                << format_g17(b) << ',' << format_g17(dev) << '\n';
        }
}

void write_text_file(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace mfp::io
