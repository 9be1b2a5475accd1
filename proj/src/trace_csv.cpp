#include "pss/trace_csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "pss/errors.hpp"

namespace pss::cli {

std::string format_number(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
    if (text.empty()) return std::nullopt;
    // from_chars rejects a leading '+', which people do write in config files
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

namespace {

// Column order matches sim::kTraceHeader.
template <typename Trace>
auto columns(Trace& tr) {
    return std::array{&tr.t, &tr.x1, &tr.x2, &tr.x3, &tr.u, &tr.v_stab, &tr.S, &tr.eta, &tr.P_e, &tr.y};
}

}  // namespace

void write_trace_csv(std::ostream& out, const sim::SimulationTrace& trace) {
    const auto cols = columns(trace);
    out << sim::kTraceHeader << '\n';
    std::string line;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        line.clear();
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) line += ',';
            line += format_number((*cols[c])[i]);
        }
        line += '\n';
        out << line;
    }
}

sim::SimulationTrace read_trace_csv(std::istream& in) {
    sim::SimulationTrace tr;
    auto cols = columns(tr);
    std::string line;
    if (!std::getline(in, line) || line != sim::kTraceHeader) {
        throw Error("trace CSV: expected header '" + std::string(sim::kTraceHeader) + "'");
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::string_view rest(line);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto comma = rest.find(',');
            const bool last = c + 1 == cols.size();
            if (last != (comma == std::string_view::npos)) {
                throw Error("trace CSV row " + std::to_string(row) + ": expected " +
                            std::to_string(cols.size()) + " fields");
            }
            const auto v = parse_number(rest.substr(0, comma));
            if (!v) throw Error("trace CSV row " + std::to_string(row) + ": bad number");
            cols[c]->push_back(*v);
            if (!last) rest.remove_prefix(comma + 1);
        }
    }
    return tr;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw OutputError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw OutputError("cannot rename into " + path.string());
    }
}

void save_trace_csv(const std::filesystem::path& path, const sim::SimulationTrace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace);
    write_file_atomic(path, os.str());
}

sim::SimulationTrace load_trace_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string());
    return read_trace_csv(f);
}

}  // namespace pss::cli
