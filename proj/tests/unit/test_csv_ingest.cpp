#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "chromasent/csv.hpp"
#include "chromasent/error.hpp"
#include "chromasent/ingest.hpp"
#include "test_support.hpp"

using namespace chromasent;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text) {
  std::istringstream in(text);
  CsvReader csv(in, "t.csv");
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  while (csv.next(row)) rows.push_back(row);
  return rows;
}

constexpr const char* kReviewHeader = "id,company_name,category,score,text,time\n";

}  // namespace

TEST_CASE("csv quoting") {
  using R = std::vector<std::vector<std::string>>;
  CHECK(read_all("a,b,c\n") == R{{"a", "b", "c"}});
  CHECK(read_all("a,\"b,c\",d\r\n") == R{{"a", "b,c", "d"}});
  CHECK(read_all("\"say \"\"hi\"\"\",x\n") == R{{"say \"hi\"", "x"}});
  CHECK(read_all("\"line\nbreak\",2\n\nz,\n") == R{{"line\nbreak", "2"}, {"z", ""}});
  CHECK(read_all("no,newline") == R{{"no", "newline"}});
  CHECK_THROWS_AS(read_all("\"open,1\n"), ParseError);
}

TEST_CASE("csv writer round trips awkward fields") {
  const std::vector<std::string> fields{"plain", "comma,inside", "quote\"inside", "multi\nline", ""};
  std::ostringstream out;
  write_csv_row(out, fields);
  const auto rows = read_all(out.str());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == fields);
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
}

TEST_CASE("timestamps") {
  CHECK(normalize_timestamp("2023-06-15 09:36:37") == "2023-06-15T09:36:37");
  CHECK(normalize_timestamp("2023-06-15T09:36:37") == "2023-06-15T09:36:37");
  CHECK(normalize_timestamp("2024-02-29 00:00:00"));
  CHECK_FALSE(normalize_timestamp("2023-02-29 00:00:00"));
  CHECK_FALSE(normalize_timestamp("2023-13-01 00:00:00"));
  CHECK_FALSE(normalize_timestamp("2023-06-15 24:00:00"));
  CHECK_FALSE(normalize_timestamp("2023/06/15 09:36:37"));
  CHECK_FALSE(normalize_timestamp("2023-06-15"));
}

TEST_CASE("sample review row parses") {
  std::istringstream in(std::string(kReviewHeader) +
                        "15708,Tang,Food,1,\"Irresistible!!! The taste of Tang is so refreshing.\","
                        "2023-06-15 09:36:37\n");
  const auto r = parse_reviews(in);
  REQUIRE(r.items.size() == 1);
  const auto& review = r.items[0];
  CHECK(review.id == 15708);
  CHECK(review.company_name == "Tang");
  CHECK(review.category == "Food");
  CHECK(review.score == 1);
  CHECK(review.time == "2023-06-15T09:36:37");
  CHECK_FALSE(review.company_id);
  CHECK(r.warnings.empty());
}

TEST_CASE("review row errors carry line numbers") {
  auto first_error_line = [](const std::string& body) -> std::size_t {
    std::istringstream in(std::string(kReviewHeader) + body);
    try {
      parse_reviews(in, "r.csv");
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(first_error_line("1,A,Food,5,ok,2023-01-01 00:00:00\n2,A,Food,6,bad,2023-01-01 00:00:00\n") == 3);
  CHECK(first_error_line("1,A,Food,0,bad,2023-01-01 00:00:00\n") == 2);
  CHECK(first_error_line("1,A,Food,five,bad,2023-01-01 00:00:00\n") == 2);
  CHECK(first_error_line("1,A,Food,3,bad,yesterday\n") == 2);
  CHECK(first_error_line("1,A,3,Food,bad,2023-01-01 00:00:00\n") == 2);
  CHECK(first_error_line("x,A,Food,3,t,2023-01-01 00:00:00\n") == 2);
  CHECK(first_error_line("1,A,Food,3,t\n") == 2);
  std::istringstream hdr("id,name,score\n");
  CHECK_THROWS_AS(parse_reviews(hdr), ParseError);
}

TEST_CASE("reader continues after a bad row") {
  std::istringstream in(std::string(kReviewHeader) +
                        "1,A,Food,5,ok,2023-01-01 00:00:00\n"
                        "2,A,Food,9,bad,2023-01-01 00:00:00\n"
                        "3,A,Food,4,ok,2023-01-01 00:00:00\n");
  ReviewReader reader(in, "r.csv");
  CHECK(reader.next()->id == 1);
  CHECK_THROWS_AS(reader.next(), ParseError);
  CHECK(reader.next()->id == 3);
  CHECK_FALSE(reader.next());
}

TEST_CASE("empty review files warn") {
  std::istringstream empty("");
  const auto a = parse_reviews(empty);
  CHECK(a.items.empty());
  CHECK(a.warnings.size() == 1);
  std::istringstream header_only(kReviewHeader);
  const auto b = parse_reviews(header_only);
  CHECK(b.items.empty());
  CHECK(b.warnings.size() == 1);
}

TEST_CASE("companies") {
  std::istringstream ok(
      "id,name,category,logo_path\n1,Tang,Food,logos/1.png\n2,\"Mama's, Kitchen\",Food,2.png\n3,Pop,Food,\n");
  const auto r = parse_companies(ok);
  REQUIRE(r.items.size() == 3);
  CHECK(r.items[1] == Company{2, "Mama's, Kitchen", "Food", "2.png"});
  CHECK(r.items[2].logo_path.empty());

  std::istringstream dup("id,name,category,logo_path\n1,A,Food,a.png\n1,B,Food,b.png\n");
  try {
    parse_companies(dup, "c.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
  std::istringstream short_row("id,name,category,logo_path\n1,A,Food\n");
  CHECK_THROWS_AS(parse_companies(short_row), ParseError);
  std::istringstream bad_header("id,category,name,logo_path\n");
  CHECK_THROWS_AS(parse_companies(bad_header), ParseError);
  std::istringstream header_only("id,name,category,logo_path\n");
  const auto h = parse_companies(header_only);
  CHECK(h.items.empty());
  CHECK(h.warnings.size() == 1);
  CHECK_THROWS_AS(load_companies("/nonexistent/companies.csv"), ConfigError);
  CHECK_THROWS_AS(load_reviews("/nonexistent/reviews.csv"), ConfigError);
}

TEST_CASE("company and review round trip") {
  const std::vector<Company> companies{{1, "A, Inc", "Food", "a.png"}, {7, "B \"quoted\"", "Drink", ""}};
  std::stringstream cs;
  write_companies_csv(cs, companies);
  CHECK(parse_companies(cs).items == companies);

  std::vector<Review> reviews;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    Review r;
    r.id = 1000 + i;
    r.company_name = i % 2 ? "A, Inc" : "B \"quoted\"";
    r.category = "Food";
    r.score = 1 + int(rng() % 5);
    r.text = "line one,\n\"line\" two " + std::to_string(rng());
    r.time = "2023-06-15T09:36:" + std::string(i % 60 < 10 ? "0" : "") + std::to_string(i % 60);
    reviews.push_back(r);
  }
  std::stringstream rs;
  write_reviews_csv(rs, reviews);
  CHECK(parse_reviews(rs).items == reviews);
}

TEST_CASE("linking by company name") {
  const std::vector<Company> companies{{1, "Tang", "Food", ""}, {2, "Twin", "Food", ""}, {3, "Twin", "Food", ""}};
  std::vector<Review> reviews(4);
  reviews[0].id = 10;
  reviews[0].company_name = "Tang";
  reviews[1].id = 11;
  reviews[1].company_name = "Twin";
  reviews[2].id = 12;
  reviews[2].company_name = "Nobody";
  reviews[3].id = 13;
  reviews[3].company_name = "tang";
  const auto rep = link_reviews(reviews, companies);
  CHECK(rep.linked == 1);
  CHECK(reviews[0].company_id == 1);
  CHECK_FALSE(reviews[1].company_id);
  CHECK(rep.unmatched == std::vector<std::int64_t>{11, 12, 13});
  CHECK(rep.ambiguous_names == std::vector<std::string>{"Twin"});
}

TEST_CASE("streaming memory is bounded by the largest row") {
  testing::TempDir dir;
  const auto path = dir.path() / "big.csv";
  std::size_t largest_text = 0;
  {
    std::ofstream out(path);
    out << kReviewHeader;
    std::mt19937_64 rng(123);
    for (int i = 0; i < 100000; ++i) {
      const std::size_t len = 20 + rng() % 200;
      largest_text = std::max(largest_text, len);
      out << i << ",Company " << (i % 50) << ",Food," << (1 + i % 5) << ",\"" << std::string(len, 'w')
          << "\",2023-06-15 09:36:37\n";
    }
  }
  std::size_t peak = 0, count = 0, total_text = 0;
  const auto n = for_each_review(path, [&](Review&& r) { ++count; total_text += r.text.size(); }, &peak);
  CHECK(n == 100000);
  CHECK(count == 100000);
  const std::size_t largest_row = largest_text + 64;
  CHECK(peak > 0);
  CHECK(peak <= 8 * largest_row);
  CHECK(peak * 100 < total_text);
}
