#include "fblkit/channel_spec.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace fblkit::cli {
namespace {

constexpr std::size_t kMaxAlphabet = 65536;
constexpr std::size_t kMaxIdentity = 4096;

std::string locate(const std::string& message, const std::string& source,
                   std::size_t line, std::size_t column) {
    std::ostringstream os;
    os << source;
    if (line > 0) {
        os << ":" << line;
        if (column > 0) os << ":" << column;
    }
    os << ": " << message;
    return os.str();
}

struct Token {
    std::string text;
    std::size_t column;  // 1-based
};

// Strips the comment, splits on blanks, remembers where each token started.
std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t end = line.find('#');
    if (end == std::string::npos) end = line.size();
    std::size_t i = 0;
    while (i < end) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < end && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

double parse_double(const Token& tok, const std::string& source,
                    std::size_t line) {
    double value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("expected a number, got '" + tok.text + "'", source,
                         line, tok.column);
    return value;
}

std::size_t parse_size(const Token& tok, const std::string& source,
                       std::size_t line) {
    std::size_t value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("expected a positive integer, got '" + tok.text + "'",
                         source, line, tok.column);
    return value;
}

std::vector<std::string> parse_labels(const std::vector<Token>& tokens,
                                      std::size_t expected,
                                      const std::string& source,
                                      std::size_t line) {
    if (tokens.size() - 1 != expected) {
        std::ostringstream os;
        os << tokens[0].text << " needs " << expected << " entries, got "
           << (tokens.size() - 1);
        throw ParseError(os.str(), source, line, tokens[0].column);
    }
    std::vector<std::string> labels;
    labels.reserve(expected);
    for (std::size_t i = 1; i < tokens.size(); ++i)
        labels.push_back(tokens[i].text);
    return labels;
}

std::string format_probability(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ParseError::ParseError(const std::string& message, const std::string& source,
                       std::size_t line, std::size_t column)
    : Error("ParseError", locate(message, source, line, column)),
      line_(line),
      column_(column) {}

ChannelSpecFile parse_channel_spec(std::istream& in,
                                   const std::string& source) {
    ChannelSpecFile spec;
    bool have_name = false;
    bool have_alphabet = false;
    bool have_labels_in = false;
    bool have_labels_out = false;
    std::size_t inputs = 0;
    std::size_t outputs = 0;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const Token& head = tokens[0];

        if (!have_name) {
            if (head.text != "name")
                throw ParseError("expected 'name' line, got '" + head.text + "'",
                                 source, lineno, head.column);
            if (tokens.size() < 2)
                throw ParseError("name line is empty", source, lineno,
                                 head.column);
            std::string name = tokens[1].text;
            for (std::size_t i = 2; i < tokens.size(); ++i)
                name += " " + tokens[i].text;
            spec.name = std::move(name);
            have_name = true;
            continue;
        }

        if (!have_alphabet) {
            if (head.text != "alphabet")
                throw ParseError(
                    "expected 'alphabet' line, got '" + head.text + "'", source,
                    lineno, head.column);
            if (tokens.size() != 3)
                throw ParseError("alphabet line needs two sizes", source,
                                 lineno, head.column);
            inputs = parse_size(tokens[1], source, lineno);
            outputs = parse_size(tokens[2], source, lineno);
            if (inputs == 0 || outputs == 0)
                throw ParseError("alphabet sizes must be positive", source,
                                 lineno, tokens[1].column);
            if (inputs > kMaxAlphabet || outputs > kMaxAlphabet)
                throw ParseError("alphabet sizes above 65536 are not supported",
                                 source, lineno, tokens[1].column);
            have_alphabet = true;
            continue;
        }

        if (head.text == "labels_in" && spec.matrix.empty()) {
            if (have_labels_in)
                throw ParseError("duplicate labels_in line", source, lineno,
                                 head.column);
            spec.input_labels = parse_labels(tokens, inputs, source, lineno);
            have_labels_in = true;
            continue;
        }

        if (head.text == "labels_out" && spec.matrix.empty()) {
            if (have_labels_out)
                throw ParseError("duplicate labels_out line", source, lineno,
                                 head.column);
            spec.output_labels = parse_labels(tokens, outputs, source, lineno);
            have_labels_out = true;
            continue;
        }

        if (spec.matrix.size() == inputs)
            throw ParseError("unexpected content after the last matrix row",
                             source, lineno, head.column);
        if (tokens.size() != outputs) {
            std::ostringstream os;
            os << "matrix row " << spec.matrix.size() << " needs " << outputs
               << " entries, got " << tokens.size();
            throw ParseError(os.str(), source, lineno, head.column);
        }
        std::vector<double> row;
        row.reserve(outputs);
        for (const Token& tok : tokens)
            row.push_back(parse_double(tok, source, lineno));
        spec.matrix.push_back(std::move(row));
    }

    if (!have_name)
        throw ParseError("missing 'name' line", source, lineno, 0);
    if (!have_alphabet)
        throw ParseError("missing 'alphabet' line", source, lineno, 0);
    if (spec.matrix.size() != inputs) {
        std::ostringstream os;
        os << "expected " << inputs << " matrix rows, got "
           << spec.matrix.size();
        throw ParseError(os.str(), source, lineno, 0);
    }
    return spec;
}

ChannelSpecFile load_channel_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open file", path.string(), 0, 0);
    return parse_channel_spec(in, path.string());
}

void write_channel_spec(std::ostream& out, const ChannelSpecFile& spec) {
    out << "# fblkit channel spec\n";
    out << "name " << spec.name << "\n";
    std::size_t inputs = spec.matrix.size();
    std::size_t outputs = inputs == 0 ? 0 : spec.matrix[0].size();
    out << "alphabet " << inputs << " " << outputs << "\n";
    if (!spec.input_labels.empty()) {
        out << "labels_in";
        for (const auto& label : spec.input_labels) out << " " << label;
        out << "\n";
    }
    if (!spec.output_labels.empty()) {
        out << "labels_out";
        for (const auto& label : spec.output_labels) out << " " << label;
        out << "\n";
    }
    for (const auto& row : spec.matrix) {
        for (std::size_t y = 0; y < row.size(); ++y) {
            if (y > 0) out << " ";
            out << format_probability(row[y]);
        }
        out << "\n";
    }
}

void save_channel_spec(const std::filesystem::path& path,
                       const ChannelSpecFile& spec) {
    std::ofstream out(path);
    if (!out)
        throw Error("IoError", "cannot write file: " + path.string());
    write_channel_spec(out, spec);
    out.flush();
    if (!out)
        throw Error("IoError", "write failed: " + path.string());
}

namespace {

std::vector<std::vector<double>> matrix_of(const Channel& ch) {
    std::vector<std::vector<double>> matrix(ch.input_size());
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        auto row = ch.row(static_cast<Symbol>(x));
        matrix[x].assign(row.begin(), row.end());
    }
    return matrix;
}

double named_parameter(const std::string& arg, std::size_t colon) {
    Token tok{arg.substr(colon + 1), colon + 2};
    return parse_double(tok, arg, 0);
}

}  // namespace

bool is_named_channel(const std::string& arg) {
    for (const char* prefix : {"bsc:", "bec:", "zchannel:", "identity:"})
        if (arg.rfind(prefix, 0) == 0) return true;
    return false;
}

ChannelSpecFile named_channel_spec(const std::string& arg) {
    std::size_t colon = arg.find(':');
    std::string family = arg.substr(0, colon);
    ChannelSpecFile spec;
    spec.name = arg;
    if (family == "bsc") {
        double p = named_parameter(arg, colon);
        if (!(p >= 0.0 && p <= 1.0))
            throw ParseError("bsc crossover must be in [0, 1]", arg, 0, 0);
        spec.matrix = matrix_of(make_bsc(p));
        spec.input_labels = {"0", "1"};
        spec.output_labels = {"0", "1"};
        return spec;
    }
    if (family == "bec") {
        double e = named_parameter(arg, colon);
        if (!(e >= 0.0 && e <= 1.0))
            throw ParseError("bec erasure rate must be in [0, 1]", arg, 0, 0);
        spec.matrix = matrix_of(make_bec(e));
        spec.input_labels = {"0", "1"};
        spec.output_labels = {"0", "1", "erasure"};
        return spec;
    }
    if (family == "zchannel") {
        double p = named_parameter(arg, colon);
        if (!(p >= 0.0 && p <= 1.0))
            throw ParseError("zchannel flip rate must be in [0, 1]", arg, 0, 0);
        spec.matrix = matrix_of(make_z_channel(p));
        spec.input_labels = {"0", "1"};
        spec.output_labels = {"0", "1"};
        return spec;
    }
    if (family == "identity") {
        Token tok{arg.substr(colon + 1), colon + 2};
        std::size_t k = parse_size(tok, arg, 0);
        if (k < 2 || k > kMaxIdentity)
            throw ParseError("identity size must be in [2, 4096]", arg, 0, 0);
        spec.matrix = matrix_of(make_identity(k));
        return spec;
    }
    throw ParseError("unknown channel family '" + family + "'", arg, 0, 0);
}

ResolvedChannel resolve_channel(const std::string& arg) {
    ChannelSpecFile spec =
        is_named_channel(arg) ? named_channel_spec(arg) : load_channel_spec(arg);
    Channel channel = make_channel(spec.matrix);
    return {std::move(spec), std::move(channel)};
}

}  // namespace fblkit::cli
