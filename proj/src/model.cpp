/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/model.hpp"

#include "sitwatch/error.hpp"
#include "sitwatch/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sitwatch::model
{
namespace
{

// Splits must reduce the second-order loss by more than this.
constexpr double kMinGain = 1e-12;
constexpr int kMaxLeafHalvings = 50;

// log(1 + e^x) - y x, stable for large |x|.
double logistic_loss(double score, double y) noexcept
{
  const double softplus = score > 0.0 ? score + std::log1p(std::exp(-score)) : std::log1p(std::exp(score));
  return softplus - y * score;
}

std::string fmt(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Split
{
  int feature = -1;
  double threshold = 0.0;
  double gain = kMinGain;
};

class TreeBuilder
{
public:
  TreeBuilder(const std::vector<double>& x, std::size_t n_features, const std::vector<double>& grad,
              const std::vector<double>& hess, const TrainConfig& cfg)
    : m_x(x), m_nf(n_features), m_g(grad), m_h(hess), m_cfg(cfg), m_goes_left(grad.size(), 0)
  {
  }

  Tree build(std::vector<std::vector<std::size_t>> sorted, std::vector<int>& leaf_rows)
  {
    m_tree = Tree{};
    m_leaf_rows.clear();
    grow(std::move(sorted), 0);
    leaf_rows = m_leaf_rows;
    return std::move(m_tree);
  }

private:
  double value(std::size_t row, std::size_t f) const { return m_x[row * m_nf + f]; }

  int grow(std::vector<std::vector<std::size_t>> sorted, int depth)
  {
    const auto& rows = sorted.front();
    double g_sum = 0.0;
    double h_sum = 0.0;
    for (std::size_t r : rows)
    {
      g_sum += m_g[r];
      h_sum += m_h[r];
    }

    const int id = static_cast<int>(m_tree.nodes.size());
    m_tree.nodes.emplace_back();
    m_leaf_rows.push_back(-1);

    const auto min_leaf = static_cast<std::size_t>(m_cfg.min_samples_leaf);
    Split best;
    if (depth < m_cfg.max_depth && rows.size() >= 2 * min_leaf)
      best = find_split(sorted, g_sum, h_sum);

    if (best.feature < 0)
    {
      m_tree.nodes[id].value = -g_sum / (h_sum + m_cfg.l2);
      m_leaf_rows[id] = static_cast<int>(rows.size());
      return id;
    }

    const auto f = static_cast<std::size_t>(best.feature);
    for (std::size_t r : rows)
      m_goes_left[r] = value(r, f) <= best.threshold ? 1 : 0;

    std::vector<std::vector<std::size_t>> left(sorted.size());
    std::vector<std::vector<std::size_t>> right(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k)
    {
      for (std::size_t r : sorted[k])
        (m_goes_left[r] ? left[k] : right[k]).push_back(r);
    }
    sorted.clear();

    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    TreeNode& node = m_tree.nodes[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split find_split(const std::vector<std::vector<std::size_t>>& sorted, double g_sum, double h_sum) const
  {
    const double lambda = m_cfg.l2;
    const double parent = g_sum * g_sum / (h_sum + lambda);
    const auto min_leaf = static_cast<std::size_t>(m_cfg.min_samples_leaf);

    Split best;
    for (std::size_t f = 0; f < m_nf; ++f)
    {
      const auto& rows = sorted[f];
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      {
        gl += m_g[rows[i]];
        hl += m_h[rows[i]];
        const double a = value(rows[i], f);
        const double b = value(rows[i + 1], f);
        if (!(a < b))
          continue;
        const std::size_t nl = i + 1;
        if (nl < min_leaf || rows.size() - nl < min_leaf)
          continue;
        const double gr = g_sum - gl;
        const double hr = h_sum - hl;
        const double gain = gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent;
        if (gain > best.gain)
        {
          double thr = a + (b - a) / 2.0;
          if (!(thr < b))
            thr = a;
          best = {static_cast<int>(f), thr, gain};
        }
      }
    }
    return best;
  }

  const std::vector<double>& m_x;
  std::size_t m_nf;
  const std::vector<double>& m_g;
  const std::vector<double>& m_h;
  const TrainConfig& m_cfg;
  std::vector<std::uint8_t> m_goes_left;
  Tree m_tree;
  std::vector<int> m_leaf_rows;
};

int leaf_index(const Tree& t, std::span<const double> x)
{
  int i = 0;
  while (!t.nodes[static_cast<std::size_t>(i)].is_leaf())
  {
    const TreeNode& n = t.nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return i;
}

} // namespace

double sigmoid(double x) noexcept
{
  if (x >= 0.0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void TrainConfig::validate() const
{
  if (n_trees < 1)
    throw Error(ErrorCode::InvalidArgument, "n_trees must be >= 1");
  if (max_depth < 1)
    throw Error(ErrorCode::InvalidArgument, "max_depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "learning_rate must be in (0, 1]");
  if (min_samples_leaf < 1)
    throw Error(ErrorCode::InvalidArgument, "min_samples_leaf must be >= 1");
  if (!(subsample_frac > 0.0 && subsample_frac <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "subsample_frac must be in (0, 1]");
  if (!(pos_weight > 0.0) || !std::isfinite(pos_weight))
    throw Error(ErrorCode::InvalidArgument, "pos_weight must be positive");
  if (!(l2 >= 0.0) || !std::isfinite(l2))
    throw Error(ErrorCode::InvalidArgument, "l2 must be non-negative");
}

double Tree::leaf_value(std::span<const double> x) const
{
  return nodes[static_cast<std::size_t>(leaf_index(*this, x))].value;
}

int Tree::depth() const
{
  // Preorder storage: children always follow their parent.
  std::vector<int> d(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf())
    {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

double Model::raw_score(std::span<const double> x) const
{
  double s = 0.0;
  for (const Tree& t : trees)
    s += t.leaf_value(x);
  return base_score + config.learning_rate * s;
}

Model train(std::span<const features::FeatureVector> features, std::span<const Label> labels,
            const TrainConfig& cfg, const features::FeatureLayout& layout, TrainTrace* trace)
{
  cfg.validate();
  if (features.size() != labels.size())
    throw Error(ErrorCode::InvalidArgument, "train: features and labels differ in length");
  if (features.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "train: need at least two rows");

  const std::size_t n = features.size();
  const std::size_t nf = layout.size();
  std::vector<double> x(n * nf);
  for (std::size_t r = 0; r < n; ++r)
  {
    const auto& fv = features[r];
    if (fv.layout_version != layout.version || fv.values.size() != nf)
      throw Error(ErrorCode::LayoutMismatch, "train: window " + std::to_string(fv.window) + " has layout '" +
                                                 fv.layout_version + "', expected '" + layout.version + "'");
    for (std::size_t f = 0; f < nf; ++f)
    {
      if (!std::isfinite(fv.values[f]))
        throw Error(ErrorCode::InvalidInput, "train: non-finite feature '" + layout.names[f] + "' in window " +
                                                 std::to_string(fv.window));
      x[r * nf + f] = fv.values[f];
    }
  }

  std::vector<double> y(n);
  std::vector<double> w(n);
  double w_pos = 0.0;
  double w_neg = 0.0;
  for (std::size_t r = 0; r < n; ++r)
  {
    y[r] = labels[r] == Label::Sit ? 1.0 : 0.0;
    w[r] = labels[r] == Label::Sit ? cfg.pos_weight : 1.0;
    (y[r] > 0.0 ? w_pos : w_neg) += w[r];
  }
  if (w_pos == 0.0 || w_neg == 0.0)
    throw Error(ErrorCode::DegenerateTraining, "train: labels contain a single class");
  const double w_total = w_pos + w_neg;

  Model model;
  model.layout_version = layout.version;
  model.feature_names = layout.names;
  model.config = cfg;
  model.base_score = std::log(w_pos / w_neg);

  std::vector<std::vector<std::size_t>> presorted(nf, std::vector<std::size_t>(n));
  for (std::size_t f = 0; f < nf; ++f)
  {
    auto& idx = presorted[f];
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a * nf + f] < x[b * nf + f]; });
  }

  std::vector<double> score(n, model.base_score);
  auto mean_loss = [&]() {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      s += w[r] * logistic_loss(score[r], y[r]);
    return s / w_total;
  };

  double loss = mean_loss();
  if (trace)
  {
    trace->loss = {loss};
    trace->leaf_rows.clear();
  }

  Rng rng(cfg.seed);
  const auto n_sub = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.subsample_frac * static_cast<double>(n))), 1, n);
  std::vector<std::size_t> order(n);
  std::vector<std::uint8_t> in_sample(n);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<int> leaf_of(n);
  TreeBuilder builder(x, nf, grad, hess, cfg);

  for (int t = 0; t < cfg.n_trees; ++t)
  {
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < n_sub && n_sub < n; ++i)
    {
      const auto j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(order[i], order[j]);
    }
    std::fill(in_sample.begin(), in_sample.end(), 0);
    for (std::size_t i = 0; i < n_sub; ++i)
      in_sample[order[i]] = 1;

    for (std::size_t r = 0; r < n; ++r)
    {
      const double p = sigmoid(score[r]);
      grad[r] = w[r] * (p - y[r]);
      hess[r] = w[r] * p * (1.0 - p);
    }

    std::vector<std::vector<std::size_t>> sorted(nf);
    for (std::size_t f = 0; f < nf; ++f)
    {
      sorted[f].reserve(n_sub);
      for (std::size_t r : presorted[f])
      {
        if (in_sample[r])
          sorted[f].push_back(r);
      }
    }

    std::vector<int> leaf_rows;
    Tree tree = builder.build(std::move(sorted), leaf_rows);

    // Per-leaf backtracking on the full training set.
    for (std::size_t r = 0; r < n; ++r)
      leaf_of[r] = leaf_index(tree, std::span<const double>(&x[r * nf], nf));
    for (std::size_t id = 0; id < tree.nodes.size(); ++id)
    {
      TreeNode& node = tree.nodes[id];
      if (!node.is_leaf())
        continue;
      double before = 0.0;
      for (std::size_t r = 0; r < n; ++r)
      {
        if (leaf_of[r] == static_cast<int>(id))
          before += w[r] * logistic_loss(score[r], y[r]);
      }
      int halvings = 0;
      for (;; ++halvings)
      {
        const double step = cfg.learning_rate * node.value;
        double after = 0.0;
        for (std::size_t r = 0; r < n; ++r)
        {
          if (leaf_of[r] == static_cast<int>(id))
            after += w[r] * logistic_loss(score[r] + step, y[r]);
        }
        if (after <= before)
          break;
        if (halvings == kMaxLeafHalvings)
        {
          node.value = 0.0;
          break;
        }
        node.value /= 2.0;
      }
    }

    for (std::size_t r = 0; r < n; ++r)
      score[r] += cfg.learning_rate * tree.nodes[static_cast<std::size_t>(leaf_of[r])].value;

    const double next = mean_loss();
    if (next > loss + 1e-12 * std::max(1.0, loss))
    {
      std::ostringstream os;
      os << "train: logistic loss increased in round " << t << " (" << loss << " -> " << next << ")";
      throw Error(ErrorCode::Internal, os.str());
    }
    loss = next;
    if (trace)
    {
      trace->loss.push_back(loss);
      trace->leaf_rows.push_back(std::move(leaf_rows));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double predict_proba(const Model& m, const features::FeatureVector& f)
{
  if (f.layout_version != m.layout_version)
    throw Error(ErrorCode::LayoutMismatch,
                "feature layout '" + f.layout_version + "' does not match model layout '" + m.layout_version + "'");
  if (f.values.size() != m.feature_names.size())
    throw Error(ErrorCode::LayoutMismatch, "feature vector has " + std::to_string(f.values.size()) +
                                               " values, model expects " + std::to_string(m.feature_names.size()));
  return sigmoid(m.raw_score(f.values));
}

Label predict(const Model& m, const features::FeatureVector& f, double threshold)
{
  return predict_proba(m, f) >= threshold ? Label::Sit : Label::NonSit;
}

/*
 * Text format, one record per line, fields separated by single spaces:
 *
 *   sitwatch-model 1
 *   layout <layout version>
 *   features <count>
 *   feature <name>                       (count lines, layout order)
 *   train <key> <value>                  (TrainConfig echo)
 *   setting <key> <value>                (featurisation echo)
 *   base_score <log-odds>
 *   trees <count>
 *   tree <index> <node count>
 *   split <feature> <threshold> <left> <right> | leaf <value>   (node lines)
 *   end
 *
 * Reals use the shortest representation that round-trips exactly.
 */
std::string serialize(const Model& m)
{
  std::ostringstream os;
  os << kModelMagic << ' ' << kModelFormatVersion << '\n';
  os << "layout " << m.layout_version << '\n';
  os << "features " << m.feature_names.size() << '\n';
  for (const auto& name : m.feature_names)
    os << "feature " << name << '\n';
  const TrainConfig& c = m.config;
  os << "train n_trees " << c.n_trees << '\n';
  os << "train max_depth " << c.max_depth << '\n';
  os << "train learning_rate " << fmt(c.learning_rate) << '\n';
  os << "train min_samples_leaf " << c.min_samples_leaf << '\n';
  os << "train subsample_frac " << fmt(c.subsample_frac) << '\n';
  os << "train seed " << c.seed << '\n';
  os << "train pos_weight " << fmt(c.pos_weight) << '\n';
  os << "train l2 " << fmt(c.l2) << '\n';
  for (const auto& [k, v] : m.feature_settings)
    os << "setting " << k << ' ' << v << '\n';
  os << "base_score " << fmt(m.base_score) << '\n';
  os << "trees " << m.trees.size() << '\n';
  for (std::size_t t = 0; t < m.trees.size(); ++t)
  {
    const Tree& tree = m.trees[t];
    os << "tree " << t << ' ' << tree.nodes.size() << '\n';
    for (const TreeNode& n : tree.nodes)
    {
      if (n.is_leaf())
        os << "leaf " << fmt(n.value) << '\n';
      else
        os << "split " << n.feature << ' ' << fmt(n.threshold) << ' ' << n.left << ' ' << n.right << '\n';
    }
  }
  os << "end\n";
  return os.str();
}

namespace
{

class LineReader
{
public:
  explicit LineReader(const std::string& text) : m_in(text) {}

  std::vector<std::string> next(const char* expect)
  {
    std::string line;
    if (!std::getline(m_in, line))
      fail(std::string("unexpected end of model, expected '") + expect + "'");
    ++m_line;
    std::vector<std::string> tok;
    std::istringstream ls(line);
    std::string t;
    while (ls >> t)
      tok.push_back(t);
    if (tok.empty() || tok[0] != expect)
      fail(std::string("expected '") + expect + "'");
    return tok;
  }

  std::string peek_keyword()
  {
    const auto pos = m_in.tellg();
    std::string word;
    m_in >> word;
    m_in.clear();
    m_in.seekg(pos);
    return word;
  }

  [[noreturn]] void fail(const std::string& msg) const
  {
    throw Error(ErrorCode::Parse, "model line " + std::to_string(m_line + 1) + ": " + msg);
  }

  template <class T>
  T number(const std::string& s) const
  {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      fail("bad number '" + s + "'");
    return v;
  }

  void arity(const std::vector<std::string>& tok, std::size_t n) const
  {
    if (tok.size() != n)
      fail("expected " + std::to_string(n - 1) + " fields after '" + tok[0] + "'");
  }

private:
  std::istringstream m_in;
  std::size_t m_line = 0;
};

} // namespace

Model deserialize(const std::string& text)
{
  LineReader in(text);
  Model m;

  auto head = in.next(kModelMagic);
  in.arity(head, 2);
  if (in.number<int>(head[1]) != kModelFormatVersion)
    in.fail("unsupported model format version " + head[1]);

  auto layout = in.next("layout");
  in.arity(layout, 2);
  m.layout_version = layout[1];

  auto count = in.next("features");
  in.arity(count, 2);
  const auto nf = in.number<std::size_t>(count[1]);
  for (std::size_t i = 0; i < nf; ++i)
  {
    auto f = in.next("feature");
    in.arity(f, 2);
    m.feature_names.push_back(f[1]);
  }

  while (in.peek_keyword() == "train")
  {
    auto t = in.next("train");
    in.arity(t, 3);
    TrainConfig& c = m.config;
    if (t[1] == "n_trees")
      c.n_trees = in.number<int>(t[2]);
    else if (t[1] == "max_depth")
      c.max_depth = in.number<int>(t[2]);
    else if (t[1] == "learning_rate")
      c.learning_rate = in.number<double>(t[2]);
    else if (t[1] == "min_samples_leaf")
      c.min_samples_leaf = in.number<int>(t[2]);
    else if (t[1] == "subsample_frac")
      c.subsample_frac = in.number<double>(t[2]);
    else if (t[1] == "seed")
      c.seed = in.number<std::uint64_t>(t[2]);
    else if (t[1] == "pos_weight")
      c.pos_weight = in.number<double>(t[2]);
    else if (t[1] == "l2")
      c.l2 = in.number<double>(t[2]);
    else
      in.fail("unknown train key '" + t[1] + "'");
  }
  while (in.peek_keyword() == "setting")
  {
    auto s = in.next("setting");
    in.arity(s, 3);
    m.feature_settings.emplace_back(s[1], s[2]);
  }

  auto base = in.next("base_score");
  in.arity(base, 2);
  m.base_score = in.number<double>(base[1]);

  auto trees = in.next("trees");
  in.arity(trees, 2);
  const auto nt = in.number<std::size_t>(trees[1]);
  for (std::size_t t = 0; t < nt; ++t)
  {
    auto th = in.next("tree");
    in.arity(th, 3);
    if (in.number<std::size_t>(th[1]) != t)
      in.fail("trees out of order");
    const auto nn = in.number<std::size_t>(th[2]);
    Tree tree;
    for (std::size_t i = 0; i < nn; ++i)
    {
      TreeNode node;
      if (in.peek_keyword() == "leaf")
      {
        auto l = in.next("leaf");
        in.arity(l, 2);
        node.value = in.number<double>(l[1]);
        if (!std::isfinite(node.value))
          in.fail("non-finite leaf value");
      }
      else
      {
        auto s = in.next("split");
        in.arity(s, 5);
        node.feature = in.number<int>(s[1]);
        node.threshold = in.number<double>(s[2]);
        node.left = in.number<int>(s[3]);
        node.right = in.number<int>(s[4]);
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= nf)
          in.fail("split feature index out of range");
        // Preorder: children come after the parent and inside the tree.
        const auto self = static_cast<int>(i);
        const auto nn_i = static_cast<int>(nn);
        if (node.left <= self || node.right <= self || node.left >= nn_i || node.right >= nn_i)
          in.fail("split children out of range");
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty())
      in.fail("empty tree");
    m.trees.push_back(std::move(tree));
  }
  in.next("end");
  return m;
}

} // namespace sitwatch::model
