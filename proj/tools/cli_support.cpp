#include "cli_support.hpp"

#include <fstream>
#include <sstream>

namespace cod::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

std::vector<std::string> config_tokens(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read config file " + file.string());
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(file.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty()) throw UsageError(file.string() + ":" + std::to_string(line_no) + ": empty key");
        if (key.rfind("--", 0) != 0) key = "--" + key;
        tokens.push_back(key + "=" + value);
    }
    return tokens;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
    // args[0] is the program name; the first token not starting with '-' is the subcommand.
    std::size_t sub = 1;
    while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
    if (sub >= args.size()) return args;

    std::vector<std::string> injected;
    std::vector<std::string> rest;
    for (std::size_t i = sub + 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            const auto t = config_tokens(args[++i]);
            injected.insert(injected.end(), t.begin(), t.end());
        } else if (a.rfind("--config=", 0) == 0) {
            const auto t = config_tokens(a.substr(9));
            injected.insert(injected.end(), t.begin(), t.end());
        } else {
            rest.push_back(a);
        }
    }
    std::vector<std::string> out(args.begin(), args.begin() + static_cast<long>(sub) + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

std::filesystem::path prepare_output_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + file.string());
}

GridFunction sample_expression(const Grid& grid, const std::string& source, const std::string& variable) {
    const auto e = expr::Expression::parse(source, {variable});
    return GridFunction::sample(grid, [&e](double v) { return cplx(e(v)); });
}

GridFunction load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    try {
        return read_csv(in);
    } catch (const GridError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

} // namespace cod::cli
