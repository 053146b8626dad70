#include "epr/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "epr/errors.hpp"

namespace epr::io {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

Basis parse_basis(const std::string& s) {
    if (s == "position") return Basis::Position;
    if (s == "momentum") return Basis::Momentum;
    throw IoError("amplitude: unknown basis '" + s + "'");
}

std::string amplitude_header(const BiphotonAmplitude& a, const char* kind) {
    std::ostringstream h;
    h << "epr-amplitude " << kind << "\n";
    h << "basis " << basis_name(a.basis) << " n1 " << a.axis1.n << " spacing1 "
      << fmt_double(a.axis1.spacing) << " n2 " << a.axis2.n << " spacing2 "
      << fmt_double(a.axis2.spacing) << "\n";
    return h.str();
}

}  // namespace

void save_amplitude_text(const std::string& path, const BiphotonAmplitude& a) {
    std::ostringstream out;
    out << amplitude_header(a, "text");
    for (const cplx& v : a.values)
        out << fmt_double(v.real()) << ' ' << fmt_double(v.imag()) << '\n';
    write_text_file(path, out.str());
}

void save_amplitude_binary(const std::string& path, const BiphotonAmplitude& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << amplitude_header(a, "binary");
    out.write(reinterpret_cast<const char*>(a.values.data()),
              static_cast<std::streamsize>(a.values.size() * sizeof(cplx)));
    if (!out) throw IoError("write failed: " + path);
}

BiphotonAmplitude load_amplitude(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string magic, kind;
    in >> magic >> kind;
    if (magic != "epr-amplitude" || (kind != "text" && kind != "binary"))
        throw IoError("amplitude: bad header in " + path);
    std::string tag, basis_s;
    int n1 = 0, n2 = 0;
    double d1 = 0.0, d2 = 0.0;
    in >> tag >> basis_s;
    if (tag != "basis") throw IoError("amplitude: bad header in " + path);
    in >> tag >> n1;
    in >> tag >> d1;
    in >> tag >> n2;
    in >> tag >> d2;
    if (!in) throw IoError("amplitude: truncated header in " + path);

    BiphotonAmplitude a;
    a.basis = parse_basis(basis_s);
    a.axis1 = Grid1D(n1, d1, a.basis);
    a.axis2 = Grid1D(n2, d2, a.basis);
    const size_t total = static_cast<size_t>(n1) * n2;
    a.values.resize(total);
    if (kind == "text") {
        for (size_t i = 0; i < total; ++i) {
            double re, im;
            if (!(in >> re >> im)) throw IoError("amplitude: truncated body in " + path);
            a.values[i] = cplx(re, im);
        }
    } else {
        in.ignore(1);  // newline after header
        in.read(reinterpret_cast<char*>(a.values.data()),
                static_cast<std::streamsize>(total * sizeof(cplx)));
        if (in.gcount() != static_cast<std::streamsize>(total * sizeof(cplx)))
            throw IoError("amplitude: truncated body in " + path);
    }
    return a;
}

void save_frame_text(const std::string& path, const Interferogram& f) {
    std::ostringstream out;
    out << "# epr-frame plane=" << plane_name(f.plane) << " n=" << f.n
        << " pitch_um=" << fmt_double(f.pixel_pitch_um) << " delta_rad=" << fmt_double(f.delta)
        << " k1=" << fmt_double(f.k1) << " k2=" << fmt_double(f.k2) << "\n";
    for (int i = 0; i < f.n; ++i) {
        for (int j = 0; j < f.n; ++j) {
            if (j) out << ' ';
            out << fmt_double(f.at(i, j));
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

Interferogram load_frame_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string header;
    std::getline(in, header);
    Interferogram f;
    auto field = [&header, &path](const char* key) {
        const std::string k = std::string(key) + "=";
        const auto pos = header.find(k);
        if (pos == std::string::npos) throw IoError("frame: missing " + k + " in " + path);
        const auto end = header.find(' ', pos + k.size());
        return header.substr(pos + k.size(), end == std::string::npos ? end : end - pos - k.size());
    };
    if (header.rfind("# epr-frame", 0) != 0) throw IoError("frame: bad header in " + path);
    const std::string plane = field("plane");
    if (plane == "image") f.plane = PlaneMode::ImagePlane;
    else if (plane == "fourier") f.plane = PlaneMode::FourierPlane;
    else throw IoError("frame: unknown plane '" + plane + "' in " + path);
    f.n = std::stoi(field("n"));
    f.pixel_pitch_um = std::stod(field("pitch_um"));
    f.delta = std::stod(field("delta_rad"));
    f.k1 = std::stod(field("k1"));
    f.k2 = std::stod(field("k2"));
    if (f.n <= 0 || f.n % 2 != 0 || !(f.pixel_pitch_um > 0.0))
        throw IoError("frame: bad geometry in " + path);
    const size_t total = static_cast<size_t>(f.n) * f.n;
    f.values.resize(total);
    for (size_t i = 0; i < total; ++i)
        if (!(in >> f.values[i])) throw IoError("frame: truncated body in " + path);
    return f;
}

void save_frame_pgm(const std::string& path, const Interferogram& f) {
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, v);
    const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "P5\n" << f.n << ' ' << f.n << "\n65535\n";
    std::string body;
    body.reserve(f.values.size() * 2);
    for (double v : f.values) {
        const double s = std::max(0.0, v) * scale;
        const unsigned u = static_cast<unsigned>(std::min(s + 0.5, 65535.0));
        body.push_back(static_cast<char>((u >> 8) & 0xFF));  // big-endian
        body.push_back(static_cast<char>(u & 0xFF));
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write failed: " + path);
}

void save_profile(const std::string& path, const Grid1D& axis, const std::vector<double>& values,
                  const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    for (int i = 0; i < axis.n; ++i)
        out << fmt_double(axis.coordinate(i)) << ' ' << fmt_double(values[i]) << '\n';
    write_text_file(path, out.str());
}

void save_distribution(const std::string& path, const Distribution1D& d,
                       const std::string& comment) {
    save_profile(path, d.axis, d.values, comment);
}

std::string format_condition_report(const ConditionReport& r) {
    std::ostringstream out;
    out << "satisfied " << (r.satisfied ? "true" : "false") << '\n';
    out << "ratio_dispersion " << fmt_double(r.ratio_dispersion) << '\n';
    out << "mask_fraction " << fmt_double(r.mask_fraction) << '\n';
    out << "tol " << fmt_double(r.tol) << '\n';
    return out.str();
}

namespace {

void append_fit(std::ostringstream& out, const char* prefix, const GaussianFit& f) {
    out << prefix << "_amplitude " << fmt_double(f.amplitude) << '\n';
    out << prefix << "_center_um " << fmt_double(f.center) << '\n';
    out << prefix << "_sigma_um " << fmt_double(f.sigma) << '\n';
    out << prefix << "_offset " << fmt_double(f.offset) << '\n';
    out << prefix << "_residual_rms " << fmt_double(f.residual_rms) << '\n';
    out << prefix << "_converged " << (f.converged ? "true" : "false") << '\n';
    out << prefix << "_iterations " << f.iterations << '\n';
}

}  // namespace

std::string format_report(const EprReport& r) {
    std::ostringstream out;
    out << "epr-report v1\n";
    out << "delta_x_cond_um " << fmt_double(r.delta_x_cond_um) << '\n';
    out << "delta_p_cond_hbar_per_um " << fmt_double(r.delta_p_cond_hbar_per_um) << '\n';
    out << "U_hbar " << fmt_double(r.u_hbar) << '\n';
    out << "U_th_hbar " << fmt_double(r.u_th_hbar) << '\n';
    out << "F_percent " << fmt_double(r.f_percent) << '\n';
    out << "D " << fmt_double(r.d) << '\n';
    out << "degraded " << (r.degraded ? "true" : "false") << '\n';
    append_fit(out, "fit_image", r.fit_image);
    append_fit(out, "fit_fourier", r.fit_fourier);
    for (const auto& [k, v] : r.config_echo) out << "config_" << k << ' ' << v << '\n';
    return out.str();
}

void save_report(const std::string& path, const EprReport& r) {
    write_text_file(path, format_report(r));
}

}  // namespace epr::io
