#include "focusplan/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace focusplan {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("mesh io: " + path + ": " + what);
}

// ---------------------------------------------------------------- OBJ ----

void parse_obj(std::istream& in, const std::string& path, TriangleMesh& mesh) {
    std::vector<Vec3> verts;
    std::vector<Vec3> normals;
    std::vector<Eigen::Vector3i> tris;
    std::vector<int> vert_normal;  // normal index per vertex, -1 if unseen

    auto resolve = [&](long idx, size_t count) -> int {
        if (idx < 0) idx += static_cast<long>(count) + 1;
        if (idx < 1 || idx > static_cast<long>(count)) fail(path, "face index out of range");
        return static_cast<int>(idx - 1);
    };

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) fail(path, "bad vertex line");
            verts.push_back(p);
        } else if (tag == "vn") {
            Vec3 n;
            if (!(ls >> n.x() >> n.y() >> n.z())) fail(path, "bad normal line");
            normals.push_back(n);
        } else if (tag == "f") {
            std::vector<int> vi;
            std::vector<int> ni;
            std::string corner;
            while (ls >> corner) {
                long v = 0, n = -1;
                const auto s1 = corner.find('/');
                if (s1 == std::string::npos) {
                    v = std::stol(corner);
                } else {
                    v = std::stol(corner.substr(0, s1));
                    const auto s2 = corner.find('/', s1 + 1);
                    if (s2 != std::string::npos && s2 + 1 < corner.size())
                        n = std::stol(corner.substr(s2 + 1));
                }
                vi.push_back(resolve(v, verts.size()));
                ni.push_back(n == -1 ? -1 : resolve(n, normals.size()));
            }
            if (vi.size() < 3) fail(path, "face with fewer than 3 vertices");
            vert_normal.resize(verts.size(), -1);
            for (size_t k = 0; k < vi.size(); ++k)
                if (ni[k] >= 0) vert_normal[static_cast<size_t>(vi[k])] = ni[k];
            for (size_t k = 2; k < vi.size(); ++k)
                tris.push_back({vi[0], vi[k - 1], vi[k]});
        }
    }
    if (verts.empty() || tris.empty()) fail(path, "empty mesh");

    mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
    for (size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = verts[i];
    mesh.triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
    for (size_t i = 0; i < tris.size(); ++i) mesh.triangles.row(static_cast<Eigen::Index>(i)) = tris[i];

    vert_normal.resize(verts.size(), -1);
    const bool all_mapped = !normals.empty() &&
        std::all_of(vert_normal.begin(), vert_normal.end(), [](int n) { return n >= 0; });
    if (all_mapped) {
        mesh.vertex_normals.resize(mesh.vertices.rows(), 3);
        for (size_t i = 0; i < verts.size(); ++i)
            mesh.vertex_normals.row(static_cast<Eigen::Index>(i)) = normals[static_cast<size_t>(vert_normal[i])];
    }
}

// ---------------------------------------------------------------- PLY ----

enum class PlyScalar { I8, U8, I16, U16, I32, U32, F32, F64 };

size_t scalar_size(PlyScalar t) {
    switch (t) {
        case PlyScalar::I8:
        case PlyScalar::U8: return 1;
        case PlyScalar::I16:
        case PlyScalar::U16: return 2;
        case PlyScalar::I32:
        case PlyScalar::U32:
        case PlyScalar::F32: return 4;
        case PlyScalar::F64: return 8;
    }
    return 0;
}

PlyScalar parse_scalar_type(const std::string& s, const std::string& path) {
    if (s == "char" || s == "int8") return PlyScalar::I8;
    if (s == "uchar" || s == "uint8") return PlyScalar::U8;
    if (s == "short" || s == "int16") return PlyScalar::I16;
    if (s == "ushort" || s == "uint16") return PlyScalar::U16;
    if (s == "int" || s == "int32") return PlyScalar::I32;
    if (s == "uint" || s == "uint32") return PlyScalar::U32;
    if (s == "float" || s == "float32") return PlyScalar::F32;
    if (s == "double" || s == "float64") return PlyScalar::F64;
    fail(path, "unknown ply property type '" + s + "'");
}

struct PlyPropertyDesc {
    std::string name;
    bool is_list = false;
    PlyScalar count_type = PlyScalar::U8;
    PlyScalar value_type = PlyScalar::F32;
};

struct PlyElementDesc {
    std::string name;
    size_t count = 0;
    std::vector<PlyPropertyDesc> properties;
};

struct PlyHeader {
    bool binary = false;
    std::vector<PlyElementDesc> elements;
};

PlyHeader parse_ply_header(std::istream& in, const std::string& path) {
    PlyHeader header;
    std::string line;
    if (!std::getline(in, line)) fail(path, "missing ply magic");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") fail(path, "not a ply file");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment" || tag == "obj_info" || tag.empty()) continue;
        if (tag == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt == "ascii") header.binary = false;
            else if (fmt == "binary_little_endian") header.binary = true;
            else fail(path, "unsupported ply format '" + fmt + "'");
        } else if (tag == "element") {
            PlyElementDesc el;
            ls >> el.name >> el.count;
            header.elements.push_back(el);
        } else if (tag == "property") {
            if (header.elements.empty()) fail(path, "property before element");
            PlyPropertyDesc prop;
            std::string type;
            ls >> type;
            if (type == "list") {
                std::string ct, vt;
                ls >> ct >> vt >> prop.name;
                prop.is_list = true;
                prop.count_type = parse_scalar_type(ct, path);
                prop.value_type = parse_scalar_type(vt, path);
            } else {
                prop.value_type = parse_scalar_type(type, path);
                ls >> prop.name;
            }
            header.elements.back().properties.push_back(prop);
        } else if (tag == "end_header") {
            return header;
        } else {
            fail(path, "unexpected header line '" + line + "'");
        }
    }
    fail(path, "unterminated ply header");
}

class PlyValueReader {
public:
    PlyValueReader(std::istream& in, bool binary, const std::string& path)
        : in_(in), binary_(binary), path_(path) {
        if (binary_ && std::endian::native != std::endian::little)
            fail(path_, "binary ply requires a little-endian host");
    }

    double read(PlyScalar type) {
        if (!binary_) {
            double v;
            if (!(in_ >> v)) fail(path_, "truncated ascii data");
            return v;
        }
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(scalar_size(type)));
        if (!in_) fail(path_, "truncated binary data");
        switch (type) {
            case PlyScalar::I8: return static_cast<double>(static_cast<signed char>(buf[0]));
            case PlyScalar::U8: return static_cast<double>(buf[0]);
            case PlyScalar::I16: { std::int16_t v; std::memcpy(&v, buf, 2); return v; }
            case PlyScalar::U16: { std::uint16_t v; std::memcpy(&v, buf, 2); return v; }
            case PlyScalar::I32: { std::int32_t v; std::memcpy(&v, buf, 4); return v; }
            case PlyScalar::U32: { std::uint32_t v; std::memcpy(&v, buf, 4); return v; }
            case PlyScalar::F32: { float v; std::memcpy(&v, buf, 4); return v; }
            case PlyScalar::F64: { double v; std::memcpy(&v, buf, 8); return v; }
        }
        return 0.0;
    }

private:
    std::istream& in_;
    bool binary_;
    const std::string& path_;
};

struct PlyContents {
    std::vector<std::string> vertex_prop_names;
    std::vector<std::vector<double>> vertex_props;  // one column per property
    std::vector<Eigen::Vector3i> faces;
    size_t vertex_count = 0;
};

PlyContents read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    PlyHeader header = parse_ply_header(in, path);
    PlyValueReader reader(in, header.binary, path);

    PlyContents contents;
    for (const auto& el : header.elements) {
        if (el.name == "vertex") {
            contents.vertex_count = el.count;
            for (const auto& p : el.properties) {
                if (p.is_list) fail(path, "list property on vertex element unsupported");
                contents.vertex_prop_names.push_back(p.name);
            }
            contents.vertex_props.assign(el.properties.size(), {});
            for (auto& col : contents.vertex_props) col.reserve(el.count);
            for (size_t i = 0; i < el.count; ++i)
                for (size_t j = 0; j < el.properties.size(); ++j)
                    contents.vertex_props[j].push_back(reader.read(el.properties[j].value_type));
        } else if (el.name == "face") {
            for (size_t i = 0; i < el.count; ++i) {
                for (const auto& p : el.properties) {
                    if (!p.is_list) {
                        reader.read(p.value_type);
                        continue;
                    }
                    const auto n = static_cast<size_t>(reader.read(p.count_type));
                    std::vector<int> poly(n);
                    for (auto& v : poly) v = static_cast<int>(reader.read(p.value_type));
                    if (p.name == "vertex_indices" || p.name == "vertex_index") {
                        if (n < 3) fail(path, "face with fewer than 3 vertices");
                        for (size_t k = 2; k < n; ++k)
                            contents.faces.push_back({poly[0], poly[k - 1], poly[k]});
                    }
                }
            }
        } else {
            // Unknown element: consume its values.
            for (size_t i = 0; i < el.count; ++i)
                for (const auto& p : el.properties) {
                    if (p.is_list) {
                        const auto n = static_cast<size_t>(reader.read(p.count_type));
                        for (size_t k = 0; k < n; ++k) reader.read(p.value_type);
                    } else {
                        reader.read(p.value_type);
                    }
                }
        }
    }
    return contents;
}

int find_prop(const PlyContents& c, const std::string& name) {
    for (size_t i = 0; i < c.vertex_prop_names.size(); ++i)
        if (c.vertex_prop_names[i] == name) return static_cast<int>(i);
    return -1;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path, double scale) {
    const std::string ext = lower_ext(path);
    TriangleMesh mesh;
    if (ext == "obj") {
        std::ifstream in(path);
        if (!in) fail(path, "cannot open file");
        parse_obj(in, path, mesh);
    } else if (ext == "ply") {
        PlyContents c = read_ply(path);
        const int xi = find_prop(c, "x"), yi = find_prop(c, "y"), zi = find_prop(c, "z");
        if (xi < 0 || yi < 0 || zi < 0) fail(path, "missing x/y/z vertex properties");
        mesh.vertices.resize(static_cast<Eigen::Index>(c.vertex_count), 3);
        for (size_t i = 0; i < c.vertex_count; ++i)
            mesh.vertices.row(static_cast<Eigen::Index>(i)) = Vec3(
                c.vertex_props[static_cast<size_t>(xi)][i], c.vertex_props[static_cast<size_t>(yi)][i],
                c.vertex_props[static_cast<size_t>(zi)][i]);
        if (c.faces.empty()) fail(path, "ply has no faces");
        mesh.triangles.resize(static_cast<Eigen::Index>(c.faces.size()), 3);
        for (size_t i = 0; i < c.faces.size(); ++i)
            mesh.triangles.row(static_cast<Eigen::Index>(i)) = c.faces[i];
        const int nx = find_prop(c, "nx"), ny = find_prop(c, "ny"), nz = find_prop(c, "nz");
        if (nx >= 0 && ny >= 0 && nz >= 0) {
            mesh.vertex_normals.resize(mesh.vertices.rows(), 3);
            for (size_t i = 0; i < c.vertex_count; ++i)
                mesh.vertex_normals.row(static_cast<Eigen::Index>(i)) = Vec3(
                    c.vertex_props[static_cast<size_t>(nx)][i], c.vertex_props[static_cast<size_t>(ny)][i],
                    c.vertex_props[static_cast<size_t>(nz)][i]);
        }
    } else {
        fail(path, "unsupported mesh format '" + ext + "' (expected obj or ply)");
    }
    if (scale != 1.0) mesh.vertices *= scale;
    finalize_mesh(mesh);
    return mesh;
}

PlyPointCloud load_ply_pointcloud(const std::string& path) {
    PlyContents c = read_ply(path);
    const int xi = find_prop(c, "x"), yi = find_prop(c, "y"), zi = find_prop(c, "z");
    if (xi < 0 || yi < 0 || zi < 0) fail(path, "missing x/y/z vertex properties");
    PlyPointCloud cloud;
    cloud.positions.resize(static_cast<Eigen::Index>(c.vertex_count), 3);
    for (size_t i = 0; i < c.vertex_count; ++i)
        cloud.positions.row(static_cast<Eigen::Index>(i)) = Vec3(
            c.vertex_props[static_cast<size_t>(xi)][i], c.vertex_props[static_cast<size_t>(yi)][i],
            c.vertex_props[static_cast<size_t>(zi)][i]);
    for (size_t j = 0; j < c.vertex_prop_names.size(); ++j) {
        const auto& name = c.vertex_prop_names[j];
        if (name == "x" || name == "y" || name == "z") continue;
        cloud.properties[name] = c.vertex_props[j];
    }
    return cloud;
}

void write_ply_pointcloud(const std::string& path, const Eigen::MatrixX3d& positions,
                          const std::vector<PlyProperty>& extra) {
    for (const auto& p : extra)
        if (static_cast<Eigen::Index>(p.values.size()) != positions.rows())
            throw std::invalid_argument("write_ply_pointcloud: property size mismatch for '" + p.name + "'");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << positions.rows() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    for (const auto& p : extra) {
        const char* type = p.type == PlyProperty::Type::Float64 ? "double"
                           : p.type == PlyProperty::Type::Float32 ? "float"
                                                                  : "uchar";
        out << "property " << type << " " << p.name << "\n";
    }
    out << "end_header\n";
    for (Eigen::Index i = 0; i < positions.rows(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const double v = positions(i, k);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
        for (const auto& p : extra) {
            const double v = p.values[static_cast<size_t>(i)];
            switch (p.type) {
                case PlyProperty::Type::Float64:
                    out.write(reinterpret_cast<const char*>(&v), 8);
                    break;
                case PlyProperty::Type::Float32: {
                    const float f = static_cast<float>(v);
                    out.write(reinterpret_cast<const char*>(&f), 4);
                    break;
                }
                case PlyProperty::Type::Uint8: {
                    const unsigned char b = static_cast<unsigned char>(v);
                    out.write(reinterpret_cast<const char*>(&b), 1);
                    break;
                }
            }
        }
    }
    if (!out) fail(path, "write failure");
}

}  // namespace focusplan
