use emoarc::ingest::Metadata;

pub struct Golden {
    pub file: &'static str,
    pub title: Option<&'static str>,
    pub author: Option<&'static str>,
    pub year: Option<u16>,
    pub language: Option<&'static str>,
    pub originally_finnish: Option<bool>,
    pub body: &'static str,
    pub chapters: usize,
    pub markers: bool,
}

pub const GOLDEN: &[Golden] = &[
    Golden {
        file: "the_markers.txt",
        title: Some("Rautatie"),
        author: Some("Juhani Aho"),
        year: Some(1884),
        language: Some("Finnish"),
        originally_finnish: Some(true),
        body: "\nI.\n\nMatti ja Liisa asuivat metsässä.\n\nII.\n\nHe näkivät junan.\n",
        chapters: 2,
        markers: true,
    },
    Golden {
        file: "this_markers.txt",
        title: Some("Pan"),
        author: Some("Knut Hamsun"),
        year: None,
        language: Some("Finnish"),
        originally_finnish: Some(false),
        body: "Metsä hiljeni illalla.\n",
        chapters: 1,
        markers: true,
    },
    Golden {
        file: "compact_mixed_case.txt",
        title: Some("Kevät"),
        author: Some("Tuntematon"),
        year: Some(1899),
        language: Some("Finnish"),
        originally_finnish: Some(true),
        body: "Lumi suli.\n\nPuro solisi.\n",
        chapters: 1,
        markers: true,
    },
    Golden {
        file: "old_end_ebook.txt",
        title: Some("Nuori Anssi"),
        author: Some("Teuvo Pakkala"),
        year: None,
        language: Some("Finnish"),
        originally_finnish: Some(true),
        body: "Anssi lähti kaupunkiin.\n",
        chapters: 1,
        markers: true,
    },
    Golden {
        file: "old_end_possessive.txt",
        title: Some("Elsa"),
        author: Some("Teuvo Pakkala"),
        year: Some(1894),
        language: Some("English"),
        originally_finnish: None,
        body: "Elsa istui rannalla.\n",
        chapters: 1,
        markers: true,
    },
    Golden {
        file: "bom_crlf.txt",
        title: Some("Koti"),
        author: Some("Maila Talvio"),
        year: Some(1897),
        language: Some("Finnish"),
        originally_finnish: Some(true),
        body: "LUKU 1\r\nKoti oli lämmin.\r\nLUKU 2\r\nIlta tuli.\r\n",
        chapters: 2,
        markers: true,
    },
    Golden {
        file: "no_markers.txt",
        title: Some("Ilman merkkejä"),
        author: Some("Nimetön"),
        year: None,
        language: None,
        originally_finnish: None,
        body: "Title: Ilman merkkejä\nAuthor: Nimetön\n\nEnsimmäinen rivi.\nToinen rivi.\n",
        chapters: 1,
        markers: false,
    },
    Golden {
        file: "repeated_start.txt",
        title: Some("Toisto"),
        author: None,
        year: None,
        language: Some("Finnish"),
        originally_finnish: Some(true),
        body: "Varsinainen teksti.\n",
        chapters: 1,
        markers: true,
    },
    Golden {
        file: "start_only.txt",
        title: Some("Kesken"),
        author: None,
        year: None,
        language: None,
        originally_finnish: None,
        body: "Tarina jatkuu loppuun asti.\n",
        chapters: 1,
        markers: true,
    },
    Golden {
        file: "front_matter_year.txt",
        title: Some("Papin rouva"),
        author: Some("Juhani Aho"),
        year: Some(1893),
        language: Some("Finnish"),
        originally_finnish: Some(true),
        body: "\nPAPIN ROUVA\n\nKirjoittanut\n\nJUHANI AHO\n\nPorvoossa,\nWerner Söderström,\n1893.\n\n\
ENSIMMÄINEN LUKU.\n\nPappila oli hiljainen.\n\nTOINEN LUKU.\n\nRouva lauloi.\n",
        chapters: 3,
        markers: true,
    },
];

impl Golden {
    pub fn metadata(&self) -> Metadata {
        Metadata {
            title: self.title.map(Into::into),
            author: self.author.map(Into::into),
            year: self.year,
            language: self.language.map(Into::into),
            originally_finnish: self.originally_finnish,
        }
    }
}
