#include "hypermat/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hypermat/error.hpp"

namespace hypermat {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string dump_json(const json& j, int indent) { return j.dump(indent); }

json complex_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_object() && j.contains("re")) {
        double im = j.contains("im") ? j.at("im").get<double>() : 0.0;
        return {j.at("re").get<double>(), im};
    }
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError("cannot read a complex number from " + j.dump());
}

json to_json(const Hypermatrix& a) {
    json re = json::array();
    json im = json::array();
    bool any_imag = false;
    for (const auto& z : a.data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
        if (z.imag() != 0.0 || std::signbit(z.imag())) any_imag = true;
    }
    json out{{"shape", a.shape()}, {"re", std::move(re)}};
    if (any_imag) out["im"] = std::move(im);
    return out;
}

Hypermatrix hypermatrix_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("shape") || !j.contains("re")) {
            throw ParseError("hypermatrix JSON needs \"shape\" and \"re\"");
        }
        const auto& js = j.at("shape");
        if (!js.is_array() || js.empty()) throw ParseError("\"shape\" must be a non-empty array");
        Shape shape;
        for (const auto& n : js) {
            if (!n.is_number_integer() || n.get<long long>() <= 0) {
                throw ParseError("\"shape\" entries must be positive integers");
            }
            shape.push_back(n.get<std::size_t>());
        }
        const std::size_t count = shape_volume(shape);
        const auto& re = j.at("re");
        if (!re.is_array() || re.size() != count) {
            throw ParseError("\"re\" must hold " + std::to_string(count) + " numbers");
        }
        const json* im = nullptr;
        if (j.contains("im")) {
            im = &j.at("im");
            if (!im->is_array() || im->size() != count) {
                throw ParseError("\"im\" must hold " + std::to_string(count) + " numbers");
            }
        }
        std::vector<cplx> data(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (!re[i].is_number() || (im && !(*im)[i].is_number())) {
                throw ParseError("non-numeric entry at position " + std::to_string(i));
            }
            data[i] = {re[i].get<double>(), im ? (*im)[i].get<double>() : 0.0};
        }
        return Hypermatrix(std::move(shape), std::move(data));
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Hypermatrix read_hypermatrix_file(const std::string& path) {
    return hypermatrix_from_json(read_json_file(path));
}

}  // namespace hypermat
