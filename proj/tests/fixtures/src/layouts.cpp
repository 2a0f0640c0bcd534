// Layout fixture for extractor fidelity tests. Every record here is
// instantiated so the compiler's record-layout dump covers it.

struct Anonymous {
  long long id;
  struct {
    int lo;
    int hi;
  };
  char tag;
};

struct WithStatics {
  static int counter;
  static const int kLimit = 4;
  int value;
  double scale;
};

struct Bits {
  char c;
  unsigned a : 3;
  unsigned b : 5;
  unsigned wide : 20;
  short s;
};

template <typename T>
struct Slot {
  T value;
  Slot* next;
};

struct Base {
  int base_field;
};

struct Derived : Base {
  Slot<int> slot;
  Slot<double> dslot;
  char tail[3];
};

class Runtime {
 public:
  int pad0;
  void* thread_list_;
  void* heap_;
  unsigned long long flags_;
  bool is_zygote_;
};

struct Flexible {
  unsigned count;
  char data[];
};

struct Tagged {
  int kind;
  union {
    int i;
    float f;
  };
  short trailer;
};

struct Nested {
  struct Inner {
    short a;
    short b;
  } inner;
  int after;
};

struct Virtual {
  virtual ~Virtual();
  int v;
};
Virtual::~Virtual() {}

int WithStatics::counter = 0;

Anonymous g_anonymous;
WithStatics g_with_statics;
Bits g_bits;
Derived g_derived;
Runtime g_runtime;
Flexible g_flexible;
Tagged g_tagged;
Nested g_nested;
Virtual* g_virtual;
