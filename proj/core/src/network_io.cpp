#include "euslem/network_io.hpp"

#include <cstring>
#include <istream>
#include <ostream>

#include "euslem/error.hpp"

namespace euslem::lexicon {

namespace {

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 4);
  }
  void i32(int v) { u32(static_cast<std::uint32_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void features(const FeatureSet& fs) {
    u32(static_cast<std::uint32_t>(fs.size()));
    for (const auto& [k, v] : fs) {
      str(k);
      str(v);
    }
  }
  template <class T, class F>
  void list(const std::vector<T>& v, F each) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (const auto& x : v) each(x);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint32_t u32() {
    unsigned char b[4];
    in_.read(reinterpret_cast<char*>(b), 4);
    if (in_.gcount() != 4) throw DataError("truncated network file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  int i32() { return static_cast<int>(u32()); }
  std::size_t count() {
    const auto n = u32();
    if (n > (1u << 28)) throw DataError("corrupt network file: implausible count");
    return n;
  }
  std::string str() {
    const auto n = count();
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw DataError("truncated network file");
    return s;
  }
  FeatureSet features() {
    FeatureSet fs;
    for (auto n = count(); n > 0; --n) {
      auto k = str();
      fs[k] = str();
    }
    return fs;
  }
  template <class T, class F>
  std::vector<T> list(F each) {
    std::vector<T> v(count());
    for (auto& x : v) x = each();
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_network(const MorphNetwork& net, std::ostream& out) {
  if (!net.rules) throw Error("network has no rules");
  out.write(kNetworkMagic, sizeof kNetworkMagic);
  Writer w(out);
  w.u32(kNetworkVersion);
  w.str(net.rules->rules().source);
  w.list(net.nodes, [&](const Node& n) {
    w.list(n.arcs, [&](const Arc& a) {
      w.i32(a.symbol);
      w.i32(a.target);
    });
    w.list(n.exits, [&](const Exit& e) {
      w.i32(e.entry);
      w.i32(e.next);
      w.u32(e.genitive ? 1 : 0);
    });
  });
  w.list(net.entries, [&](const NetEntry& e) {
    w.list(e.symbols, [&](SymbolId s) { w.i32(s); });
    w.str(e.form);
    w.str(e.gloss);
    w.str(e.lemma);
    w.str(e.category);
    w.str(e.subcategory);
    w.features(e.features);
    w.str(e.sublexicon);
    w.u32((e.standard ? 1u : 0u) | (e.stem ? 2u : 0u));
  });
  w.i32(net.root);
  w.i32(net.reentry);
  w.str(net.elided_category);
  w.u32(static_cast<std::uint32_t>(net.genitive_cases.size()));
  for (const auto& c : net.genitive_cases) w.str(c);
  w.i32(net.max_ellipsis_depth);
  w.list(net.guesser, [&](const GuesserArc& g) {
    w.str(g.category);
    w.list(g.items, [&](const std::vector<SymbolId>& item) { w.list(item, [&](SymbolId s) { w.i32(s); }); });
    w.list(g.repeats, [&](twolevel::Repeat r) { w.u32(static_cast<std::uint32_t>(r)); });
    w.i32(g.next);
  });
  w.u32(static_cast<std::uint32_t>(net.sublexicon_roots.size()));
  for (const auto& [name, node] : net.sublexicon_roots) {
    w.str(name);
    w.i32(node);
  }
  if (!out) throw Error("failed writing network");
}

MorphNetwork load_network(std::istream& in) {
  char magic[sizeof kNetworkMagic];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic || std::memcmp(magic, kNetworkMagic, sizeof magic) != 0)
    throw DataError("not a compiled network (bad magic)");
  Reader r(in);
  const auto version = r.u32();
  if (version != kNetworkVersion)
    throw DataError("network format version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kNetworkVersion) + "); recompile it");
  MorphNetwork net;
  net.rules = std::make_shared<const twolevel::CompiledRules>(twolevel::parse_rules(r.str()));
  net.nodes = r.list<Node>([&] {
    Node n;
    n.arcs = r.list<Arc>([&] {
      Arc a;
      a.symbol = r.i32();
      a.target = r.i32();
      return a;
    });
    n.exits = r.list<Exit>([&] {
      Exit e;
      e.entry = r.i32();
      e.next = r.i32();
      e.genitive = r.u32() != 0;
      return e;
    });
    return n;
  });
  net.entries = r.list<NetEntry>([&] {
    NetEntry e;
    e.symbols = r.list<SymbolId>([&] { return r.i32(); });
    e.form = r.str();
    e.gloss = r.str();
    e.lemma = r.str();
    e.category = r.str();
    e.subcategory = r.str();
    e.features = r.features();
    e.sublexicon = r.str();
    const auto flags = r.u32();
    e.standard = flags & 1u;
    e.stem = flags & 2u;
    return e;
  });
  net.root = r.i32();
  net.reentry = r.i32();
  net.elided_category = r.str();
  for (auto n = r.count(); n > 0; --n) net.genitive_cases.insert(r.str());
  net.max_ellipsis_depth = r.i32();
  net.guesser = r.list<GuesserArc>([&] {
    GuesserArc g;
    g.category = r.str();
    g.items = r.list<std::vector<SymbolId>>([&] { return r.list<SymbolId>([&] { return r.i32(); }); });
    g.repeats = r.list<twolevel::Repeat>([&] { return static_cast<twolevel::Repeat>(r.u32()); });
    g.next = r.i32();
    return g;
  });
  for (auto n = r.count(); n > 0; --n) {
    auto name = r.str();
    net.sublexicon_roots[name] = r.i32();
  }

  const auto nodes = static_cast<int>(net.nodes.size());
  const auto entries = static_cast<int>(net.entries.size());
  auto node_ok = [&](int i) { return i >= 0 && i < nodes; };
  if (!node_ok(net.root) || (net.reentry != -1 && !node_ok(net.reentry)))
    throw DataError("corrupt network file: root out of range");
  for (const auto& n : net.nodes) {
    for (const auto& a : n.arcs)
      if (!node_ok(a.target)) throw DataError("corrupt network file: arc target out of range");
    for (const auto& e : n.exits)
      if (e.entry < 0 || e.entry >= entries || (e.next != -1 && !node_ok(e.next)))
        throw DataError("corrupt network file: exit out of range");
  }
  return net;
}

}  // namespace euslem::lexicon
